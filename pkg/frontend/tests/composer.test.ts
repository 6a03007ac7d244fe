import { describe, expect, it } from 'vitest';
import { composeDefinition } from '../src/composer.js';

describe('composeDefinition', () => {
  it('serializes the three-step definition', () => {
    const result = composeDefinition('make the house taller', [
      'remove the roof',
      'build a huge wall',
      'build a large roof',
    ]);
    expect(result.ok).toBe(true);
    expect(result.utterance).toBe(
      'def: make the house taller; remove the roof; build a huge wall; build a large roof',
    );
  });

  it('rejects an empty head', () => {
    expect(composeDefinition('  ', ['build a wall']).ok).toBe(false);
  });

  it('rejects an empty body', () => {
    expect(composeDefinition('build a skylight', []).ok).toBe(false);
  });

  it('rejects blank body lines', () => {
    expect(composeDefinition('build a skylight', ['build a wall', '  ']).ok).toBe(false);
  });

  it('rejects the reserved separator inside a line', () => {
    const result = composeDefinition('x', ['build a wall; build a roof']);
    expect(result.ok).toBe(false);
    expect(result.error).toMatch(/reserved/);
  });

  it('rejects defining a command as itself', () => {
    expect(composeDefinition('build a wall', ['Build a Wall']).ok).toBe(false);
  });

  it('trims whitespace', () => {
    const result = composeDefinition('  build a skylight ', [' build a tiny window on the roof ']);
    expect(result.utterance).toBe('def: build a skylight; build a tiny window on the roof');
  });
});
