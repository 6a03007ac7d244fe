/** Grid-marching raycast over the world store, mirroring the server's rule:
 * visit every cell the ray passes through, in order; the cell crossed just
 * before the hit is where a hint build would start. */
import type { WorldStore } from './worldStore.js';

export interface VoxelHit {
  cell: [number, number, number];
  /** Empty cell the ray crossed immediately before hitting. */
  prev: [number, number, number] | null;
}

export function voxelRaycast(
  store: WorldStore,
  origin: [number, number, number],
  direction: [number, number, number],
  maxDistance = 512,
): VoxelHit | null {
  if (store.size === 0) return null;
  let [cx, cy, cz] = origin.map(Math.floor) as [number, number, number];
  if (store.has(cx, cy, cz)) {
    return { cell: [cx, cy, cz], prev: null };
  }
  const [dx, dy, dz] = direction;
  const step = [Math.sign(dx), Math.sign(dy), Math.sign(dz)];
  const tDelta = [
    dx === 0 ? Infinity : Math.abs(1 / dx),
    dy === 0 ? Infinity : Math.abs(1 / dy),
    dz === 0 ? Infinity : Math.abs(1 / dz),
  ];
  const bound = (o: number, d: number, c: number, s: number) =>
    s === 0 ? Infinity : ((s > 0 ? c + 1 - o : o - c) / Math.abs(d));
  const tMax = [
    bound(origin[0], dx, cx, step[0]),
    bound(origin[1], dy, cy, step[1]),
    bound(origin[2], dz, cz, step[2]),
  ];
  let prev: [number, number, number] | null = [cx, cy, cz];
  let t = 0;
  while (t <= maxDistance) {
    if (tMax[0] <= tMax[1] && tMax[0] <= tMax[2]) {
      t = tMax[0]; cx += step[0]; tMax[0] += tDelta[0];
    } else if (tMax[1] <= tMax[2]) {
      t = tMax[1]; cy += step[1]; tMax[1] += tDelta[1];
    } else {
      t = tMax[2]; cz += step[2]; tMax[2] += tDelta[2];
    }
    if (store.has(cx, cy, cz)) {
      return { cell: [cx, cy, cz], prev };
    }
    prev = [cx, cy, cz];
  }
  return null;
}
