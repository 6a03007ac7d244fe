/** Chat transcript state: user/agent message pairs with classification badges,
 * kept in server seq order. */
import type { Classification } from './types.js';

export interface TranscriptEntry {
  seq: number;
  user: string;
  agent: string;
  classification: Classification | null;
  needsHint: boolean;
}

export const BADGE_CLASS: Record<Classification, string> = {
  core: 'badge-core',
  induced: 'badge-induced',
  unparsable: 'badge-unparsable',
  conversational: 'badge-conversational',
  definition: 'badge-definition',
};

export class Transcript {
  private entries: TranscriptEntry[] = [];

  get length(): number {
    return this.entries.length;
  }

  all(): readonly TranscriptEntry[] {
    return this.entries;
  }

  last(): TranscriptEntry | undefined {
    return this.entries[this.entries.length - 1];
  }

  /** Insert by seq; replies can arrive out of order under request overlap. */
  append(entry: TranscriptEntry): void {
    const at = this.entries.findIndex((e) => e.seq > entry.seq);
    if (at === -1) {
      this.entries.push(entry);
    } else {
      this.entries.splice(at, 0, entry);
    }
  }

  /** A hint reply updates the pending exchange rather than adding a turn. */
  resolvePending(seq: number, agent: string, classification: Classification): void {
    for (let i = this.entries.length - 1; i >= 0; i -= 1) {
      const e = this.entries[i];
      if (e.needsHint) {
        e.agent = agent;
        e.classification = classification;
        e.needsHint = false;
        e.seq = seq;
        return;
      }
    }
  }

  badgeFor(entry: TranscriptEntry): string {
    return entry.classification ? BADGE_CLASS[entry.classification] : 'badge-pending';
  }

  inSeqOrder(): boolean {
    for (let i = 1; i < this.entries.length; i += 1) {
      if (this.entries[i - 1].seq > this.entries[i].seq) return false;
    }
    return true;
  }
}
