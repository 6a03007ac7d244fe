/** Definition composer: client-side validation mirroring the server's
 * definition syntax, then serialization to the `def:` wire shape. */

export interface ComposeResult {
  ok: boolean;
  utterance?: string;
  error?: string;
}

/** `;` separates segments on the wire, so it cannot appear inside one. */
const RESERVED = ';';

export function composeDefinition(head: string, bodyLines: string[]): ComposeResult {
  const trimmedHead = head.trim();
  if (!trimmedHead) {
    return { ok: false, error: 'the new command needs a name' };
  }
  if (trimmedHead.includes(RESERVED)) {
    return { ok: false, error: "';' is reserved as the step separator" };
  }
  const body = bodyLines.map((l) => l.trim());
  if (body.length === 0) {
    return { ok: false, error: 'a definition needs at least one step' };
  }
  for (const line of body) {
    if (!line) {
      return { ok: false, error: 'definition steps cannot be empty' };
    }
    if (line.includes(RESERVED)) {
      return { ok: false, error: "';' is reserved as the step separator" };
    }
  }
  if (body.some((line) => line.toLowerCase() === trimmedHead.toLowerCase())) {
    return { ok: false, error: 'a command cannot be defined as itself' };
  }
  return { ok: true, utterance: `def: ${[trimmedHead, ...body].join('; ')}` };
}
