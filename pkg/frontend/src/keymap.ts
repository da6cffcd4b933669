/** Keyboard dispatch: arrows walk the tree, w expands, u saves the path. */

import type { CommandName } from './api.js';

const MAP: Record<string, CommandName> = {
  ArrowLeft: 'left',
  ArrowRight: 'right',
  ArrowUp: 'up',
  ArrowDown: 'down',
  w: 'expand',
  u: 'export_selected',
};

export function keyToCommand(key: string): CommandName | null {
  return MAP[key] ?? null;
}

export function isBoundKey(key: string): boolean {
  return key in MAP;
}
