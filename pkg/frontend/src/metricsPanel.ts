/** Dashboard data shaping for the two live curves, renderer-agnostic. */
import type { MetricsReply } from './types.js';

export interface Series {
  label: string;
  points: [number, number][];
}

export function naturalizationSeries(metrics: MetricsReply): Series[] {
  return [
    { label: 'core', points: metrics.naturalization.map((p) => [p[0], p[1]]) },
    { label: 'induced', points: metrics.naturalization.map((p) => [p[0], p[2]]) },
    { label: 'unparsable', points: metrics.naturalization.map((p) => [p[0], p[3]]) },
  ];
}

export function expressivenessSeries(metrics: MetricsReply): Series[] {
  return [{ label: 'expressiveness', points: metrics.expressiveness.map((p) => [p[0], p[1]]) }];
}

/** Map data points into pixel space with a small margin. */
export function layoutPoints(
  points: [number, number][],
  width: number,
  height: number,
  yMax?: number,
): [number, number][] {
  if (points.length === 0) return [];
  const margin = 8;
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const xMin = Math.min(...xs);
  const xSpan = Math.max(1e-9, Math.max(...xs) - xMin);
  const top = yMax ?? Math.max(1, ...ys);
  const w = width - 2 * margin;
  const h = height - 2 * margin;
  return points.map(([x, y]) => [
    margin + ((x - xMin) / xSpan) * w,
    margin + (1 - y / top) * h,
  ]);
}

const SERIES_COLORS: Record<string, string> = {
  core: '#4c9f70',
  induced: '#4287f5',
  unparsable: '#d9534f',
  expressiveness: '#8e6bbf',
};

export function drawSeries(
  ctx: CanvasRenderingContext2D,
  series: Series[],
  width: number,
  height: number,
  yMax?: number,
): void {
  ctx.clearRect(0, 0, width, height);
  for (const s of series) {
    const pts = layoutPoints(s.points, width, height, yMax);
    if (pts.length === 0) continue;
    ctx.strokeStyle = SERIES_COLORS[s.label] ?? '#888';
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(pts[0][0], pts[0][1]);
    for (const [x, y] of pts.slice(1)) ctx.lineTo(x, y);
    ctx.stroke();
  }
}
