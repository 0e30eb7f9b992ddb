/** Tokenizer for editor highlighting; mirrors the analyzer's lexer rules. */

export type SpanKind =
  | 'keyword'
  | 'identifier'
  | 'number'
  | 'operator'
  | 'delimiter'
  | 'comment'
  | 'space'
  | 'error';

export interface HighlightSpan {
  text: string;
  kind: SpanKind;
}

const KEYWORDS = new Set([
  'params',
  'array',
  'for',
  'in',
  'step',
  'if',
  'else',
  'read',
  'write',
  'update',
]);

const OPERATORS = ['&&', '<=', '>=', '==', '..', '+', '-', '*', '/', '<', '>'];
const DELIMITERS = new Set(['[', ']', '{', '}', '(', ')', ',', ';']);

function isIdentStart(ch: string): boolean {
  return /[A-Za-z_]/.test(ch);
}

function isIdentChar(ch: string): boolean {
  return /[A-Za-z0-9_]/.test(ch);
}

/** Split source into styled spans; concatenating span texts restores the source. */
export function highlight(source: string): HighlightSpan[] {
  const spans: HighlightSpan[] = [];
  let pos = 0;
  outer: while (pos < source.length) {
    const ch = source[pos];
    if (/\s/.test(ch)) {
      let end = pos + 1;
      while (end < source.length && /\s/.test(source[end])) end += 1;
      spans.push({ text: source.slice(pos, end), kind: 'space' });
      pos = end;
      continue;
    }
    if (source.startsWith('//', pos)) {
      let end = source.indexOf('\n', pos);
      if (end < 0) end = source.length;
      spans.push({ text: source.slice(pos, end), kind: 'comment' });
      pos = end;
      continue;
    }
    if (/[0-9]/.test(ch)) {
      let end = pos + 1;
      while (end < source.length && /[0-9]/.test(source[end])) end += 1;
      spans.push({ text: source.slice(pos, end), kind: 'number' });
      pos = end;
      continue;
    }
    if (isIdentStart(ch)) {
      let end = pos + 1;
      while (end < source.length && isIdentChar(source[end])) end += 1;
      const text = source.slice(pos, end);
      spans.push({ text, kind: KEYWORDS.has(text) ? 'keyword' : 'identifier' });
      pos = end;
      continue;
    }
    if (DELIMITERS.has(ch)) {
      spans.push({ text: ch, kind: 'delimiter' });
      pos += 1;
      continue;
    }
    for (const op of OPERATORS) {
      if (source.startsWith(op, pos)) {
        spans.push({ text: op, kind: 'operator' });
        pos += op.length;
        continue outer;
      }
    }
    spans.push({ text: ch, kind: 'error' });
    pos += 1;
  }
  return spans;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** HTML for the editor overlay; optional [start, end) ranges get an extra class. */
export function highlightHtml(
  source: string,
  marks: Array<{ start: number; end: number; className: string; title?: string }> = [],
): string {
  const pieces: string[] = [];
  let offset = 0;
  for (const span of highlight(source)) {
    const end = offset + span.text.length;
    const mark = marks.find((m) => m.start < end && offset < m.end);
    const classes = mark ? `tok-${span.kind} ${mark.className}` : `tok-${span.kind}`;
    const title = mark?.title ? ` title="${escapeHtml(mark.title)}"` : '';
    pieces.push(`<span class="${classes}"${title}>${escapeHtml(span.text)}</span>`);
    offset = end;
  }
  return pieces.join('');
}
