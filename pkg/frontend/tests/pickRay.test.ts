import { describe, expect, it } from 'vitest';
import { clientToNdc, pickRay } from '../src/pickRay.js';
import { voxelRaycast } from '../src/voxelRaycast.js';
import { WorldStore } from '../src/worldStore.js';

describe('pickRay', () => {
  const camera = {
    position: [0, 0, 10] as [number, number, number],
    target: [0, 0, 0] as [number, number, number],
    fovYDegrees: 90,
    aspect: 2,
  };

  it('center click looks straight down the view axis', () => {
    const ray = pickRay(camera, 0, 0);
    expect(ray.origin).toEqual([0, 0, 10]);
    expect(ray.direction[0]).toBeCloseTo(0, 10);
    expect(ray.direction[1]).toBeCloseTo(0, 10);
    expect(ray.direction[2]).toBeCloseTo(-1, 10);
  });

  it('edge clicks tilt by the field of view', () => {
    // fov 90: the top edge of the viewport is 45 degrees up
    const ray = pickRay(camera, 0, 1);
    const angle = Math.atan2(ray.direction[1], -ray.direction[2]);
    expect(angle).toBeCloseTo(Math.PI / 4, 6);
    // aspect 2 doubles the horizontal half-angle's tangent
    const right = pickRay(camera, 1, 0);
    expect(right.direction[0] / -right.direction[2]).toBeCloseTo(2, 6);
  });

  it('directions are unit length', () => {
    for (const [nx, ny] of [[0.3, -0.7], [-1, 1], [0.9, 0.2]] as const) {
      const { direction } = pickRay(camera, nx, ny);
      expect(Math.hypot(...direction)).toBeCloseTo(1, 12);
    }
  });

  it('clientToNdc maps corners and center', () => {
    const rect = { left: 10, top: 20, width: 200, height: 100 };
    expect(clientToNdc(110, 70, rect)).toEqual([0, -0]);
    expect(clientToNdc(10, 20, rect)).toEqual([-1, 1]);
    expect(clientToNdc(210, 120, rect)).toEqual([1, -1]);
  });
});

describe('voxelRaycast', () => {
  it('hits the first occupied cell and reports the face cell', () => {
    const store = new WorldStore();
    store.applyDiff({ seq: 0, placed: [[3, 0, 0, 1, null]], removed: [] });
    const hit = voxelRaycast(store, [0, 0.5, 0.5], [1, 0, 0]);
    expect(hit).not.toBeNull();
    expect(hit!.cell).toEqual([3, 0, 0]);
    expect(hit!.prev).toEqual([2, 0, 0]);
  });

  it('misses an empty store', () => {
    expect(voxelRaycast(new WorldStore(), [0, 0, 0], [1, 0, 0])).toBeNull();
  });

  it('starting inside a block hits it with no face cell', () => {
    const store = new WorldStore();
    store.applyDiff({ seq: 0, placed: [[2, 2, 2, 1, null]], removed: [] });
    const hit = voxelRaycast(store, [2.5, 2.5, 2.5], [0, 1, 0]);
    expect(hit!.cell).toEqual([2, 2, 2]);
    expect(hit!.prev).toBeNull();
  });

  it('respects the distance cap', () => {
    const store = new WorldStore();
    store.applyDiff({ seq: 0, placed: [[600, 0, 0, 1, null]], removed: [] });
    expect(voxelRaycast(store, [0, 0.5, 0.5], [1, 0, 0], 100)).toBeNull();
  });
});
