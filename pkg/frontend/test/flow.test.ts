/** Scripted session flow, the full interactive loop against the in-memory
 * service: expand the root, walk to both children, expand each, check the
 * tree panel shape, then export a leaf path. */

import { expect, test } from 'vitest';

import { Controller } from '../src/controller.js';
import { layoutTree } from '../src/layout.js';
import { shapeOf } from '../src/state.js';
import { FakeTransport, waitUntil } from './fake.js';

const fast = { sleep: () => Promise.resolve() };

/** Poll sleep that suspends until the test opens it, so a job can be
 * observed mid-flight (instant sleeps settle jobs before any macrotask). */
function gatedSleep() {
  let open = false;
  const waiters: Array<() => void> = [];
  return {
    sleep: () => {
      if (open) return Promise.resolve();
      return new Promise<void>((r) => {
        waiters.push(r);
      });
    },
    open: () => {
      open = true;
      for (const r of waiters.splice(0)) r();
    },
  };
}

function makeController(t: FakeTransport, exports: Array<{ name: string; text: string }>) {
  return new Controller(t, {
    ...fast,
    onExport: (name, text) => exports.push({ name, text }),
  });
}

test('expand to 1+2+4 and download a leaf path', async () => {
  const t = new FakeTransport();
  const exports: Array<{ name: string; text: string }> = [];
  const c = makeController(t, exports);

  await c.start({ scenario: 'builtin:planar_car', seed: 0 });
  expect(c.state.session).toBe(t.session);
  expect(shapeOf(c.state.view!)).toEqual([{ level: -1, count: 1 }]);

  await c.handleKey('w'); // expand the root, resolves when the job settles
  expect(c.state.lastKey).toBe('w');
  expect(c.state.job).toBeNull();
  expect(shapeOf(c.state.view!)).toEqual([
    { level: -1, count: 1 },
    { level: 0, count: 2 },
  ]);

  await c.handleKey('ArrowDown'); // cheapest child
  const first = c.state.view!.selection;
  await c.handleKey('w');
  await c.handleKey('ArrowRight'); // second child
  expect(c.state.view!.selection).not.toBe(first);
  await c.handleKey('w');

  expect(shapeOf(c.state.view!)).toEqual([
    { level: -1, count: 1 },
    { level: 0, count: 2 },
    { level: 1, count: 4 },
  ]);
  // the tree panel renders from this layout alone
  const lay = layoutTree(c.state.view!, 800, 600);
  expect(lay.columns.map((col) => col.count)).toEqual([1, 2, 4]);

  await c.handleKey('ArrowDown'); // onto a leaf
  await c.handleKey('u');
  expect(exports).toHaveLength(1);
  const rows = exports[0].text
    .trim()
    .split('\n')
    .map((r) => r.split(',').map(Number));
  expect(rows).toHaveLength(128);
  expect(rows[0]).toEqual(t.scenario.problem.start);
  expect(rows[rows.length - 1]).toEqual(t.scenario.problem.goal);
});

test('navigation saturates at the ends with a notice', async () => {
  const t = new FakeTransport();
  const c = makeController(t, []);
  await c.start({ scenario: 'builtin:planar_car' });
  await c.handleKey('w');
  await c.handleKey('ArrowDown');
  await c.handleKey('ArrowRight');
  const last = c.state.view!.selection;
  await c.handleKey('ArrowRight'); // already at the last sibling
  expect(c.state.view!.selection).toBe(last);
  expect(c.state.notice).toMatch(/last sibling/);
});

test('keys during a running job are local no-ops', async () => {
  const t = new FakeTransport();
  const gate = gatedSleep();
  const c = new Controller(t, { sleep: gate.sleep });
  await c.start({ scenario: 'builtin:planar_car' });

  const pending = c.handleKey('w'); // parks on the first gated poll sleep
  await waitUntil(() => c.state.job !== null);
  const sent = t.commandLog.length;
  await c.handleKey('ArrowDown');
  expect(c.state.notice).toMatch(/expansion running/);
  expect(t.commandLog.length).toBe(sent); // nothing reached the wire
  gate.open();
  await pending;
  expect(c.state.job).toBeNull();
  expect(shapeOf(c.state.view!)).toEqual([
    { level: -1, count: 1 },
    { level: 0, count: 2 },
  ]);
});

test('export on the root surfaces the service error as a notice', async () => {
  const t = new FakeTransport();
  const exports: Array<{ name: string; text: string }> = [];
  const c = makeController(t, exports);
  await c.start({ scenario: 'builtin:planar_car' });
  await c.handleKey('u');
  expect(exports).toHaveLength(0);
  expect(c.state.notice).toMatch(/root has no path/);
});

test('connection loss raises the banner and retry clears it', async () => {
  const t = new FakeTransport();
  const c = makeController(t, []);
  await c.start({ scenario: 'builtin:planar_car' });
  t.failNextTree = 1;
  await c.refresh();
  expect(c.state.banner).toMatch(/connection lost/);
  await c.refresh(); // service is back
  expect(c.state.banner).toBeNull();
  expect(c.state.view).not.toBeNull();
});

test('rejoin rebuilds the identical display from the served tree', async () => {
  const t = new FakeTransport();
  const c = makeController(t, []);
  await c.start({ scenario: 'builtin:planar_car' });
  await c.handleKey('w');
  await c.handleKey('ArrowDown');
  const before = c.state.view!;

  const again = makeController(t, []);
  await again.rejoin(t.session, t.scenario);
  expect(again.state.view!.selection).toBe(before.selection);
  expect(again.state.view!.nodes).toEqual(before.nodes);
  expect(again.state.view!.levels).toEqual(before.levels);
});
