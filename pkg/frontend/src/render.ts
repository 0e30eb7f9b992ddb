import type { DiagnosticJson, FormulaJson, ReportJson } from './types.js';

/** Renders a LaTeX string to HTML markup (KaTeX's renderToString shape). */
export type LatexRenderer = (latex: string) => string;

export type Banner =
  | { kind: 'retry'; message: string }
  | { kind: 'busy'; message: string }
  | { kind: 'timeout'; message: string }
  | { kind: 'rejected'; message: string };

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function formulaHtml(formula: FormulaJson, typeset: LatexRenderer): string {
  let math: string;
  try {
    math = typeset(formula.latex);
  } catch {
    math = `<code>${escapeHtml(formula.latex)}</code>`;
  }
  return (
    `<span class="formula">` +
    `<span class="formula-math">${math}</span>` +
    `<code class="formula-plain">${escapeHtml(formula.plain)}</code>` +
    `</span>`
  );
}

/** Full report pane: DMD formula, counts, and the reuse-group table. */
export function reportHtml(report: ReportJson, typeset: LatexRenderer): string {
  const parts: string[] = [];
  parts.push(`<section class="dmd-box">`);
  parts.push(`<h2>Data-movement distance</h2>`);
  parts.push(`<div class="dmd-formula">${formulaHtml(report.dmd, typeset)}</div>`);
  parts.push(`</section>`);

  parts.push(`<section><h2>Access counts</h2><table class="counts">`);
  for (const key of ['n_total', 'n_warm', 'n_cold'] as const) {
    parts.push(
      `<tr><th>${key}</th><td>${formulaHtml(report.counts[key], typeset)}</td></tr>`,
    );
  }
  parts.push(`</table></section>`);

  parts.push(`<section><h2>Reuse-distance groups</h2>`);
  if (report.groups.length === 0) {
    parts.push(`<p>No reuse: every access is a cold miss.</p>`);
  } else {
    parts.push(
      `<table class="groups"><tr>` +
        `<th>reuse</th><th>rd</th><th>multiplicity</th><th></th></tr>`,
    );
    for (const group of report.groups) {
      const label =
        group.source_label && group.pred_label
          ? `${escapeHtml(group.source_label)} after ${escapeHtml(group.pred_label)}`
          : `statement ${group.class.source} after ${group.class.pred}`;
      const tag = group.scaling
        ? `<span class="tag tag-scaling">scaling</span>`
        : `<span class="tag tag-diagnostic">diagnostic</span>`;
      const note = group.fit_error
        ? `<div class="fit-error">no closed form: ${escapeHtml(group.fit_error)}</div>`
        : '';
      parts.push(
        `<tr><td>${label}<div class="carrier">carrier dim ${group.class.carrier}</div></td>` +
          `<td>${formulaHtml(group.rd, typeset)}</td>` +
          `<td>${formulaHtml(group.multiplicity, typeset)}${note}</td>` +
          `<td>${tag}</td></tr>`,
      );
    }
    parts.push(`</table>`);
  }
  parts.push(`</section>`);
  return parts.join('\n');
}

export function diagnosticsHtml(diagnostics: DiagnosticJson[]): string {
  const items = diagnostics
    .map(
      (d) =>
        `<li><span class="diag-category">${escapeHtml(d.category)}</span> ` +
        `${escapeHtml(d.message)} <span class="diag-span">at ${d.start}..${d.end}</span></li>`,
    )
    .join('');
  return `<section class="diagnostics"><h2>Diagnostics</h2><ul>${items}</ul></section>`;
}

export function bannerHtml(banner: Banner): string {
  return `<div class="banner banner-${banner.kind}">${escapeHtml(banner.message)}</div>`;
}
