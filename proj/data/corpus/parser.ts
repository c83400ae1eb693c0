export interface Token {
  kind: "number" | "ident" | "punct";
  text: string;
  offset: number;
}

const PUNCT = new Set(["(", ")", "+", "-", "*", "/", ","]);

export function tokenize(source: string): Token[] {
  const tokens: Token[] = [];
  let offset = 0;
  while (offset < source.length) {
    const ch = source[offset];
    if (ch === " " || ch === "\t") {
      offset += 1;
      continue;
    }
    if (ch >= "0" && ch <= "9") {
      let end = offset;
      while (end < source.length && source[end] >= "0" && source[end] <= "9") {
        end += 1;
      }
      tokens.push({ kind: "number", text: source.slice(offset, end), offset });
      offset = end;
      continue;
    }
    if (PUNCT.has(ch)) {
      tokens.push({ kind: "punct", text: ch, offset });
      offset += 1;
      continue;
    }
    let end = offset;
    while (end < source.length && !PUNCT.has(source[end]) && source[end] !== " ") {
      end += 1;
    }
    tokens.push({ kind: "ident", text: source.slice(offset, end), offset });
    offset = end;
  }
  return tokens;
}
