/** UI interaction modes and the pending-hint handshake with the server.
 *
 * Invariant: hint mode is active exactly when the server reports a pending
 * hint. Prompt editing is a sub-mode of hint capture: offsets accumulate
 * relative to the first clicked anchor cell and are submitted together
 * with the cursor ray.
 */
import type { PromptBlock } from './types.js';

export type Mode = 'chat' | 'hint' | 'prompt-edit';

export class ViewState {
  private currentMode: Mode = 'chat';
  private anchor: [number, number, number] | null = null;
  private promptBlocks: PromptBlock[] = [];
  promptBlockType = 1;

  get mode(): Mode {
    return this.currentMode;
  }

  get prompt(): readonly PromptBlock[] {
    return this.promptBlocks;
  }

  /** Called with every server reply; flips hint mode on and off. */
  syncPending(serverNeedsHint: boolean): void {
    if (serverNeedsHint && this.currentMode === 'chat') {
      this.currentMode = 'hint';
    } else if (!serverNeedsHint) {
      this.currentMode = 'chat';
      this.anchor = null;
      this.promptBlocks = [];
    }
  }

  get hintActive(): boolean {
    return this.currentMode === 'hint' || this.currentMode === 'prompt-edit';
  }

  enterPromptEdit(): boolean {
    if (this.currentMode !== 'hint') return false;
    this.currentMode = 'prompt-edit';
    return true;
  }

  leavePromptEdit(): void {
    if (this.currentMode === 'prompt-edit') this.currentMode = 'hint';
  }

  /** Accumulate one prompt block at a world cell; first click sets the anchor. */
  addPromptCell(x: number, y: number, z: number): PromptBlock | null {
    if (this.currentMode !== 'prompt-edit') return null;
    if (this.anchor === null) {
      this.anchor = [x, y, z];
    }
    const block: PromptBlock = {
      dx: x - this.anchor[0],
      dy: y - this.anchor[1],
      dz: z - this.anchor[2],
      t: this.promptBlockType,
    };
    if (this.promptBlocks.some((b) => b.dx === block.dx && b.dy === block.dy && b.dz === block.dz)) {
      return null; // one block per offset
    }
    this.promptBlocks.push(block);
    return block;
  }
}
