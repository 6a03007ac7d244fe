import { describe, expect, it } from 'vitest';
import { expressivenessSeries, layoutPoints, naturalizationSeries } from '../src/metricsPanel.js';

const metrics = {
  v: 1,
  naturalization: [
    [1, 1.0, 0.0, 0.0],
    [2, 0.5, 0.5, 0.0],
  ] as [number, number, number, number][],
  expressiveness: [[1, 1.0], [2, 1.667]] as [number, number][],
};

describe('metricsPanel', () => {
  it('splits the naturalization reply into three series', () => {
    const series = naturalizationSeries(metrics);
    expect(series.map((s) => s.label)).toEqual(['core', 'induced', 'unparsable']);
    expect(series[1].points).toEqual([[1, 0.0], [2, 0.5]]);
  });

  it('shapes the expressiveness series', () => {
    expect(expressivenessSeries(metrics)[0].points).toEqual([[1, 1.0], [2, 1.667]]);
  });

  it('lays points into pixel space with margins', () => {
    const pts = layoutPoints([[1, 0], [2, 1]], 100, 50, 1);
    expect(pts[0][0]).toBeCloseTo(8);
    expect(pts[1][0]).toBeCloseTo(92);
    expect(pts[0][1]).toBeCloseTo(42); // y=0 sits at the bottom margin
    expect(pts[1][1]).toBeCloseTo(8);  // y=max sits at the top margin
  });

  it('handles empty input', () => {
    expect(layoutPoints([], 100, 50)).toEqual([]);
  });
});
