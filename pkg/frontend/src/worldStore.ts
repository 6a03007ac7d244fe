/** Client-side mirror of the session's voxel world, fed by the diff stream.
 *
 * Applying every diff from seq 0 must reproduce the server's world endpoint
 * exactly; that equality is the invariant the viewer relies on.
 */
import type { CellTuple, WorldDiff } from './types.js';

export interface StoredCell {
  t: number;
  label: string | null;
}

const key = (x: number, y: number, z: number) => `${x},${y},${z}`;

export class WorldStore {
  private cells = new Map<string, StoredCell>();
  private appliedSeq = -1;

  get lastSeq(): number {
    return this.appliedSeq;
  }

  get size(): number {
    return this.cells.size;
  }

  /** Apply one diff; stale or duplicate seqs are ignored. */
  applyDiff(diff: WorldDiff): boolean {
    if (diff.seq <= this.appliedSeq) {
      return false;
    }
    for (const [x, y, z, t, label] of diff.placed) {
      this.cells.set(key(x, y, z), { t, label });
    }
    for (const [x, y, z] of diff.removed) {
      this.cells.delete(key(x, y, z));
    }
    this.appliedSeq = diff.seq;
    return true;
  }

  applyAll(diffs: WorldDiff[]): number {
    let applied = 0;
    for (const d of [...diffs].sort((a, b) => a.seq - b.seq)) {
      if (this.applyDiff(d)) applied += 1;
    }
    return applied;
  }

  get(x: number, y: number, z: number): StoredCell | undefined {
    return this.cells.get(key(x, y, z));
  }

  has(x: number, y: number, z: number): boolean {
    return this.cells.has(key(x, y, z));
  }

  /** Cells as wire tuples, sorted ascending (y, x, z) like the server. */
  snapshot(): CellTuple[] {
    const out: CellTuple[] = [];
    for (const [k, cell] of this.cells) {
      const [x, y, z] = k.split(',').map(Number);
      out.push([x, y, z, cell.t, cell.label]);
    }
    out.sort((a, b) => a[1] - b[1] || a[0] - b[0] || a[2] - b[2]);
    return out;
  }

  /** True when the local mirror equals the server's cell list. */
  matches(serverCells: CellTuple[]): boolean {
    if (serverCells.length !== this.cells.size) return false;
    for (const [x, y, z, t, label] of serverCells) {
      const mine = this.cells.get(key(x, y, z));
      if (!mine || mine.t !== t || mine.label !== (label ?? null)) return false;
    }
    return true;
  }

  bounds(): { min: [number, number, number]; max: [number, number, number] } | null {
    if (this.cells.size === 0) return null;
    const min: [number, number, number] = [Infinity, Infinity, Infinity];
    const max: [number, number, number] = [-Infinity, -Infinity, -Infinity];
    for (const k of this.cells.keys()) {
      const [x, y, z] = k.split(',').map(Number);
      min[0] = Math.min(min[0], x); max[0] = Math.max(max[0], x);
      min[1] = Math.min(min[1], y); max[1] = Math.max(max[1], y);
      min[2] = Math.min(min[2], z); max[2] = Math.max(max[2], z);
    }
    return { min, max };
  }

  forEach(fn: (x: number, y: number, z: number, cell: StoredCell) => void): void {
    for (const [k, cell] of this.cells) {
      const [x, y, z] = k.split(',').map(Number);
      fn(x, y, z, cell);
    }
  }
}
