import { describe, expect, it } from "vitest";

import {
  BOS,
  EOS,
  NUM_VERBS,
  PAD,
  SRC_TOKENS,
  SRC_VERB_OFFSET,
  TGT_TOKENS,
  TGT_VERB_OFFSET,
  VERBS,
  decodeTarget,
  encodeSource,
  encodeTarget,
} from "../src/vocab.js";

describe("vocabularies", () => {
  it("has eight verbs in a contiguous block of both vocabularies", () => {
    expect(NUM_VERBS).toBe(8);
    for (let i = 0; i < NUM_VERBS; i++) {
      expect(SRC_TOKENS[SRC_VERB_OFFSET + i]).toBe(VERBS[i]);
      expect(TGT_TOKENS[TGT_VERB_OFFSET + i]).toBe(VERBS[i].toUpperCase());
    }
  });

  it("covers the full command language", () => {
    expect(SRC_TOKENS).toHaveLength(17); // pad + 8 verbs + 8 modifiers/conjunctions
    expect(TGT_TOKENS).toHaveLength(13); // pad/bos/eos + 8 actions + 2 turns
  });

  it("round-trips a target string", () => {
    const text = "LTURN JUMP LTURN JUMP RTURN WALK";
    expect(decodeTarget(encodeTarget(text))).toBe(text);
  });

  it("encodes a command and rejects unknown tokens", () => {
    expect(encodeSource("jump around left and walk twice")).toHaveLength(6);
    expect(() => encodeSource("jump sideways")).toThrow(/unknown input token/);
    expect(() => encodeTarget("FLY")).toThrow(/unknown output token/);
  });

  it("stops decoding at EOS and skips PAD/BOS", () => {
    const jump = encodeTarget("JUMP")[0];
    expect(decodeTarget([BOS, jump, EOS, jump, jump])).toBe("JUMP");
    expect(decodeTarget([PAD, jump, PAD])).toBe("JUMP");
  });
});
