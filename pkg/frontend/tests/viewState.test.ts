import { describe, expect, it } from 'vitest';
import { ViewState } from '../src/viewState.js';

describe('ViewState', () => {
  it('mirrors the server pending flag', () => {
    const vs = new ViewState();
    expect(vs.mode).toBe('chat');
    vs.syncPending(true);
    expect(vs.mode).toBe('hint');
    vs.syncPending(false);
    expect(vs.mode).toBe('chat');
  });

  it('prompt edit only enters from hint mode', () => {
    const vs = new ViewState();
    expect(vs.enterPromptEdit()).toBe(false);
    vs.syncPending(true);
    expect(vs.enterPromptEdit()).toBe(true);
    expect(vs.mode).toBe('prompt-edit');
    vs.leavePromptEdit();
    expect(vs.mode).toBe('hint');
  });

  it('accumulates offsets relative to the first clicked cell', () => {
    const vs = new ViewState();
    vs.syncPending(true);
    vs.enterPromptEdit();
    expect(vs.addPromptCell(10, 3, 10)).toEqual({ dx: 0, dy: 0, dz: 0, t: 1 });
    expect(vs.addPromptCell(11, 3, 10)).toEqual({ dx: 1, dy: 0, dz: 0, t: 1 });
    expect(vs.addPromptCell(11, 3, 10)).toBeNull(); // one block per offset
    expect(vs.prompt.length).toBe(2);
  });

  it('completing the hint clears prompt state', () => {
    const vs = new ViewState();
    vs.syncPending(true);
    vs.enterPromptEdit();
    vs.addPromptCell(1, 1, 1);
    vs.syncPending(false);
    expect(vs.mode).toBe('chat');
    expect(vs.prompt.length).toBe(0);
  });

  it('ignores clicks outside prompt-edit mode', () => {
    const vs = new ViewState();
    vs.syncPending(true);
    expect(vs.addPromptCell(1, 1, 1)).toBeNull();
  });
});
