/** Screen click to world ray for a perspective camera, without renderer
 * dependencies so the math is testable headless. */

export interface CameraPose {
  position: [number, number, number];
  target: [number, number, number];
  up?: [number, number, number];
  fovYDegrees: number;
  aspect: number;
}

export interface PickedRay {
  origin: [number, number, number];
  direction: [number, number, number];
}

type V3 = [number, number, number];

const sub = (a: V3, b: V3): V3 => [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
const cross = (a: V3, b: V3): V3 => [
  a[1] * b[2] - a[2] * b[1],
  a[2] * b[0] - a[0] * b[2],
  a[0] * b[1] - a[1] * b[0],
];
const norm = (a: V3): V3 => {
  const n = Math.hypot(a[0], a[1], a[2]);
  if (n === 0) throw new Error('degenerate camera pose');
  return [a[0] / n, a[1] / n, a[2] / n];
};

/** ndcX/ndcY in [-1, 1], x right, y up (WebGL convention). */
export function pickRay(camera: CameraPose, ndcX: number, ndcY: number): PickedRay {
  const forward = norm(sub(camera.target, camera.position));
  let upHint = camera.up ?? [0, 1, 0];
  let rightRaw = cross(forward, upHint);
  if (Math.hypot(...rightRaw) < 1e-9) {
    // camera looks along the up axis; fall back to a perpendicular basis
    upHint = [0, 0, -1];
    rightRaw = cross(forward, upHint);
  }
  const right = norm(rightRaw);
  const up = cross(right, forward);
  const halfH = Math.tan((camera.fovYDegrees * Math.PI) / 360);
  const halfW = halfH * camera.aspect;
  const direction = norm([
    forward[0] + right[0] * ndcX * halfW + up[0] * ndcY * halfH,
    forward[1] + right[1] * ndcX * halfW + up[1] * ndcY * halfH,
    forward[2] + right[2] * ndcX * halfW + up[2] * ndcY * halfH,
  ]);
  return { origin: [...camera.position], direction };
}

/** Click position inside a canvas element to NDC coordinates. */
export function clientToNdc(
  clientX: number,
  clientY: number,
  rect: { left: number; top: number; width: number; height: number },
): [number, number] {
  return [
    ((clientX - rect.left) / rect.width) * 2 - 1,
    -(((clientY - rect.top) / rect.height) * 2 - 1),
  ];
}
