// Fixed vocabularies for the modified SCAN command language.
// Verbs occupy a contiguous block in both vocabularies so the
// permutation-equivariant model can treat them as a cyclic group.

export const VERBS = ["look", "jump", "run", "walk", "sprint", "crawl", "squat", "lunge"];
export const NUM_VERBS = VERBS.length;

const INPUT_NON_VERBS = ["left", "right", "opposite", "around", "twice", "thrice", "and", "after"];
const OUTPUT_ACTIONS = VERBS.map((v) => v.toUpperCase());
const OUTPUT_NON_VERBS = ["LTURN", "RTURN"];

export const PAD = 0;
export const BOS = 1;
export const EOS = 2;

// Source: [PAD, verbs..., non-verbs...]
export const SRC_TOKENS = ["<pad>", ...VERBS, ...INPUT_NON_VERBS];
// Target: [PAD, BOS, EOS, verb actions..., LTURN, RTURN]
export const TGT_TOKENS = ["<pad>", "<bos>", "<eos>", ...OUTPUT_ACTIONS, ...OUTPUT_NON_VERBS];

export const SRC_VERB_OFFSET = 1; // verbs start right after PAD
export const TGT_VERB_OFFSET = 3; // verb actions start after PAD/BOS/EOS

const srcIndex = new Map(SRC_TOKENS.map((t, i) => [t, i]));
const tgtIndex = new Map(TGT_TOKENS.map((t, i) => [t, i]));

export function encodeSource(text: string): number[] {
  return text.split(/\s+/).filter(Boolean).map((tok) => {
    const id = srcIndex.get(tok);
    if (id === undefined) throw new Error(`unknown input token: ${tok}`);
    return id;
  });
}

export function encodeTarget(text: string): number[] {
  return text.split(/\s+/).filter(Boolean).map((tok) => {
    const id = tgtIndex.get(tok);
    if (id === undefined) throw new Error(`unknown output token: ${tok}`);
    return id;
  });
}

export function decodeTarget(ids: number[]): string {
  const out: string[] = [];
  for (const id of ids) {
    if (id === EOS) break;
    if (id === PAD || id === BOS) continue;
    out.push(TGT_TOKENS[id]);
  }
  return out.join(" ");
}
