import { expect, test } from 'vitest';

import { isBoundKey, keyToCommand } from '../src/keymap.js';

test('arrows, w and u map to wire commands', () => {
  expect(keyToCommand('ArrowLeft')).toBe('left');
  expect(keyToCommand('ArrowRight')).toBe('right');
  expect(keyToCommand('ArrowUp')).toBe('up');
  expect(keyToCommand('ArrowDown')).toBe('down');
  expect(keyToCommand('w')).toBe('expand');
  expect(keyToCommand('u')).toBe('export_selected');
});

test('anything else is unbound', () => {
  for (const key of ['x', 'W', 'Enter', ' ', 'Escape', 'ArrowLeftX']) {
    expect(keyToCommand(key)).toBeNull();
    expect(isBoundKey(key)).toBe(false);
  }
  expect(isBoundKey('w')).toBe(true);
});
