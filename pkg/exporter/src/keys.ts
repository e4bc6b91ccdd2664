/**
 * Canonical text form and embedding keys.
 *
 * A text's key is the SHA-256 hex digest of its canonical form: NFC-normalized,
 * runs of ASCII whitespace collapsed to single spaces, outer spaces stripped.
 * The whitespace set is fixed to [ \t\n\v\f\r] so the rule is reproducible
 * across implementations (the pipeline that emits texts uses the same rule).
 */

import { createHash } from "node:crypto";

const WS_RUN = /[ \t\n\v\f\r]+/g;

export function canonicalText(text: string): string {
  return text
    .normalize("NFC")
    .replace(WS_RUN, " ")
    .replace(/^ +| +$/g, "");
}

export function textKey(text: string): string {
  return createHash("sha256").update(canonicalText(text), "utf8").digest("hex");
}

export const KEY_PATTERN = /^[0-9a-f]{64}$/;
