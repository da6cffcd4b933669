/** The same scripted flow against a real service process.
 *
 * Opt-in: set PATHMINIMA_LIVE=1 (and have the Python package installed so
 * the `pathminima` entry point is on PATH). The session is created with a
 * 20000-iteration budget and seed 0, where the walled-room car world grows
 * the reference 1+2+4 tree; the whole script takes a couple of minutes.
 */

import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, test } from 'vitest';

import { HttpTransport } from '../src/api.js';
import { Controller } from '../src/controller.js';
import { shapeOf } from '../src/state.js';

const PORT = 8719;
const BASE = `http://127.0.0.1:${PORT}`;
const live = process.env.PATHMINIMA_LIVE === '1';

async function waitReady(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      await fetch(`${BASE}/docs`);
      return;
    } catch {
      await new Promise((r) => setTimeout(r, 250));
    }
  }
  throw new Error('service never came up');
}

describe.runIf(live)('live service', () => {
  let proc: ChildProcess;

  beforeAll(async () => {
    proc = spawn('pathminima', ['serve', '--port', String(PORT)], { stdio: 'ignore' });
    await waitReady();
  });

  afterAll(() => {
    proc?.kill();
  });

  test('car session grows 1+2+4 and exports a leaf', async () => {
    const exports: Array<{ name: string; text: string }> = [];
    const c = new Controller(new HttpTransport(BASE), {
      pollMs: 250,
      onExport: (name, text) => exports.push({ name, text }),
    });
    await c.start({
      scenario: 'builtin:planar_car',
      seed: 0,
      params: { budget_iterations: 20000, budget_seconds: null },
    });
    expect(c.state.banner).toBeNull();
    expect(c.state.session).toBeTruthy();
    const start = c.state.scenario!.problem.start;
    const goal = c.state.scenario!.problem.goal;

    await c.handleKey('w');
    expect(shapeOf(c.state.view!)).toEqual([
      { level: -1, count: 1 },
      { level: 0, count: 2 },
    ]);

    await c.handleKey('ArrowDown');
    await c.handleKey('w');
    await c.handleKey('ArrowRight');
    await c.handleKey('w');
    expect(shapeOf(c.state.view!)).toEqual([
      { level: -1, count: 1 },
      { level: 0, count: 2 },
      { level: 1, count: 4 },
    ]);

    await c.handleKey('ArrowDown');
    await c.handleKey('u');
    expect(exports).toHaveLength(1);
    const rows = exports[0].text
      .trim()
      .split('\n')
      .map((r) => r.split(',').map(Number));
    for (let j = 0; j < start.length; j++) {
      expect(rows[0][j]).toBeCloseTo(start[j], 9);
      expect(rows[rows.length - 1][j]).toBeCloseTo(goal[j], 9);
    }
  });
});
