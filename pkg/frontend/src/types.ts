/** Wire types mirroring the server's v1 JSON schemas. */

export const API_VERSION = 1;

/** One voxel as it travels over the wire: x, y, z, block type id, label. */
export type CellTuple = [number, number, number, number, string | null];

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export interface CursorRay {
  origin: [number, number, number];
  direction: [number, number, number];
}

export interface PromptBlock {
  dx: number;
  dy: number;
  dz: number;
  t: number;
}

export interface WorldDiff {
  seq: number;
  placed: CellTuple[];
  removed: CellTuple[];
}

export type Classification =
  | 'core'
  | 'induced'
  | 'unparsable'
  | 'conversational'
  | 'definition';

export interface SessionInfo {
  v: number;
  session_id: string;
  house_id: string;
  session_index: number;
  seq: number;
  dims: [number, number, number];
}

export interface UtteranceReply {
  v: number;
  seq: number;
  agent_text?: string;
  classification?: Classification;
  needs_hint?: boolean;
  diff?: { placed: CellTuple[]; removed: CellTuple[] };
  error?: string;
}

export interface WorldReply {
  v: number;
  seq: number;
  cells: CellTuple[];
  diffs: WorldDiff[];
}

export interface DefinitionEntry {
  head: string;
  body: string[];
  author: string;
  created_at: number;
}

export interface MetricsReply {
  v: number;
  naturalization: [number, number, number, number][];
  expressiveness: [number, number][];
}

export interface HouseEntry {
  house_id: string;
  dims: [number, number, number];
}
