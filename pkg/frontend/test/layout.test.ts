import { expect, test } from 'vitest';

import type { SessionView } from '../src/api.js';
import { layoutTree, nodeAt } from '../src/layout.js';

// root -> two level-0 nodes -> four leaves, the walled-room reference shape
const VIEW: SessionView = {
  selection: 5,
  levels: { '-1': 1, '0': 2, '1': 4 },
  nodes: [
    { id: 0, level: -1, parent: null, status: 'expanded', cost: 0, children: [1, 2] },
    { id: 1, level: 0, parent: 0, status: 'expanded', cost: 4.466, children: [5, 6] },
    { id: 2, level: 0, parent: 0, status: 'expanded', cost: 4.471, children: [7, 8] },
    { id: 5, level: 1, parent: 1, status: 'unexpanded', cost: 4.62, children: [] },
    { id: 6, level: 1, parent: 1, status: 'spurious', cost: 7.84, children: [] },
    { id: 7, level: 1, parent: 2, status: 'unexpanded', cost: 4.59, children: [] },
    { id: 8, level: 1, parent: 2, status: 'unexpanded', cost: 7.9, children: [] },
  ],
};

test('columns are levels left to right with node counts', () => {
  const lay = layoutTree(VIEW, 800, 600);
  expect(lay.columns.map((c) => c.level)).toEqual([-1, 0, 1]);
  expect(lay.columns.map((c) => c.count)).toEqual([1, 2, 4]);
  const xs = lay.columns.map((c) => c.x);
  expect(xs[0]).toBeLessThan(xs[1]);
  expect(xs[1]).toBeLessThan(xs[2]);
});

test('families stay contiguous so edges never cross', () => {
  const lay = layoutTree(VIEW, 800, 600);
  const y = (id: number) => lay.nodes.find((n) => n.id === id)!.y;
  // node 1's children sit above node 2's children, matching parent order
  expect(Math.max(y(5), y(6))).toBeLessThan(Math.min(y(7), y(8)));
  expect(y(1)).toBeLessThan(y(2));
});

test('ranks are 1-based cost order within each level', () => {
  const lay = layoutTree(VIEW, 800, 600);
  const rank = (id: number) => lay.nodes.find((n) => n.id === id)!.rank;
  expect(rank(0)).toBe(1);
  expect(rank(1)).toBe(1);
  expect(rank(2)).toBe(2);
  expect(rank(7)).toBe(1); // 4.59 cheapest on the leaf level
  expect(rank(5)).toBe(2);
  expect(rank(6)).toBe(3);
  expect(rank(8)).toBe(4);
});

test('selection and status pass through to placed nodes', () => {
  const lay = layoutTree(VIEW, 800, 600);
  expect(lay.nodes.find((n) => n.id === 5)!.selected).toBe(true);
  expect(lay.nodes.filter((n) => n.selected)).toHaveLength(1);
  expect(lay.nodes.find((n) => n.id === 6)!.status).toBe('spurious');
  expect(lay.edges).toContainEqual([0, 1]);
  expect(lay.edges).toHaveLength(6);
});

test('hit testing finds the node under the cursor', () => {
  const lay = layoutTree(VIEW, 800, 600);
  const n5 = lay.nodes.find((n) => n.id === 5)!;
  expect(nodeAt(lay, n5.x + 3, n5.y - 3)).toBe(5);
  expect(nodeAt(lay, 2, 2)).toBeNull();
});

test('a lone root centers in its column', () => {
  const fresh: SessionView = {
    selection: 0,
    levels: { '-1': 1 },
    nodes: [{ id: 0, level: -1, parent: null, status: 'unexpanded', cost: 0, children: [] }],
  };
  const lay = layoutTree(fresh, 400, 300);
  expect(lay.columns).toHaveLength(1);
  expect(lay.nodes[0].x).toBeCloseTo(200);
  expect(lay.nodes[0].y).toBeCloseTo(150);
});
