import { PlaygroundApi } from './api.js';
import { highlightHtml } from './highlight.js';
import { PRESETS, presetByName } from './presets.js';
import { bannerHtml, diagnosticsHtml, reportHtml, type LatexRenderer } from './render.js';
import { EditorSession } from './session.js';
import type { DiagnosticJson } from './types.js';

declare global {
  interface Window {
    katex?: { renderToString: (latex: string, opts?: object) => string };
  }
}

function typesetter(): LatexRenderer {
  const katex = window.katex;
  if (katex) {
    return (latex) => katex.renderToString(latex, { throwOnError: true, displayMode: false });
  }
  return (latex) => `<code>${latex.replace(/</g, '&lt;')}</code>`;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setup(): void {
  const editor = el<HTMLTextAreaElement>('editor');
  const overlay = el<HTMLElement>('editor-overlay');
  const output = el<HTMLElement>('output');
  const bannerBox = el<HTMLElement>('banner');
  const status = el<HTMLElement>('status');
  const runButton = el<HTMLButtonElement>('run');
  const presetSelect = el<HTMLSelectElement>('preset');
  const blockSize = el<HTMLInputElement>('block-size');
  const numSets = el<HTMLInputElement>('num-sets');
  const plainToggle = el<HTMLInputElement>('plain-toggle');

  const typeset = typesetter();
  let marks: Array<{ start: number; end: number; className: string; title?: string }> = [];

  const refreshOverlay = (): void => {
    overlay.innerHTML = highlightHtml(editor.value, marks) + '\n';
  };
  const syncScroll = (): void => {
    overlay.scrollTop = editor.scrollTop;
    overlay.scrollLeft = editor.scrollLeft;
  };

  const session = new EditorSession(new PlaygroundApi(), {
    onStateChange: (state) => {
      status.textContent = state === 'idle' ? '' : state;
      runButton.disabled = state === 'submitting' || state === 'queued' || state === 'running';
    },
    onClearBanner: () => {
      bannerBox.innerHTML = '';
      marks = [];
      refreshOverlay();
    },
    onReport: (report) => {
      output.innerHTML = reportHtml(report, typeset);
      output.classList.toggle('show-plain', plainToggle.checked);
    },
    onDiagnostics: (diagnostics: DiagnosticJson[]) => {
      output.innerHTML = diagnosticsHtml(diagnostics);
      marks = diagnostics.map((d) => ({
        start: d.start,
        end: Math.max(d.end, d.start + 1),
        className: 'mark-error',
        title: `${d.category}: ${d.message}`,
      }));
      refreshOverlay();
    },
    onBanner: (banner) => {
      bannerBox.innerHTML = bannerHtml(banner);
    },
  });

  for (const preset of PRESETS) {
    const option = document.createElement('option');
    option.value = preset.name;
    option.textContent = preset.label;
    presetSelect.appendChild(option);
  }
  const loadPreset = (name: string): void => {
    const preset = presetByName(name);
    if (!preset) return;
    session.selectedExample = name;
    session.source = preset.source;
    editor.value = preset.source;
    marks = [];
    refreshOverlay();
  };
  presetSelect.addEventListener('change', () => loadPreset(presetSelect.value));

  editor.addEventListener('input', () => {
    session.source = editor.value;
    marks = [];
    refreshOverlay();
  });
  editor.addEventListener('scroll', syncScroll);

  plainToggle.addEventListener('change', () => {
    output.classList.toggle('show-plain', plainToggle.checked);
  });

  runButton.addEventListener('click', () => {
    const config = {
      block_size: Math.max(1, Number(blockSize.value) || 1),
      num_sets: Math.max(1, Number(numSets.value) || 1),
    };
    void session.run(config);
  });

  window.addEventListener('beforeunload', () => session.cancel());

  loadPreset(PRESETS[0].name);
  presetSelect.value = PRESETS[0].name;
}

setup();
