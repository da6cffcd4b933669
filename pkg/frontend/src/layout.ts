/** Tree panel layout, a pure function of the session view.
 *
 * Levels become columns (root leftmost). Within a column nodes follow a
 * depth-first walk of cost-sorted children so families stay contiguous and
 * parent-child edges never cross. Each node carries its cost rank within
 * the level (1 = cheapest), the label the panel draws.
 */

import type { NodeStatus, SessionView } from './api.js';
import { nodeById } from './state.js';

export interface PlacedNode {
  id: number;
  level: number;
  x: number;
  y: number;
  r: number;
  rank: number;
  status: NodeStatus;
  selected: boolean;
}

export interface Column {
  level: number;
  count: number;
  x: number;
}

export interface TreeLayout {
  columns: Column[];
  nodes: PlacedNode[];
  /** parent id, child id pairs */
  edges: Array<[number, number]>;
  width: number;
  height: number;
}

const NODE_R = 13;
const MARGIN = 44;

export function layoutTree(view: SessionView, width: number, height: number): TreeLayout {
  const levels = [...new Set(view.nodes.map((n) => n.level))].sort((a, b) => a - b);
  const colX = new Map<number, number>();
  const span = Math.max(width - 2 * MARGIN, 1);
  levels.forEach((lv, i) => {
    colX.set(lv, levels.length === 1 ? width / 2 : MARGIN + (span * i) / (levels.length - 1));
  });

  // depth-first from the root in child order fixes the vertical sequence
  const order = new Map<number, number[]>();
  const root = view.nodes.find((n) => n.parent === null);
  const seen = new Set<number>();
  const stack = root ? [root.id] : [];
  while (stack.length) {
    const id = stack.pop()!;
    if (seen.has(id)) continue;
    seen.add(id);
    const n = nodeById(view, id)!;
    const seq = order.get(n.level) ?? [];
    seq.push(id);
    order.set(n.level, seq);
    for (let i = n.children.length - 1; i >= 0; i--) stack.push(n.children[i]);
  }
  for (const n of view.nodes) {
    if (seen.has(n.id)) continue;
    const seq = order.get(n.level) ?? [];
    seq.push(n.id);
    order.set(n.level, seq);
  }

  const ranks = new Map<number, number>();
  for (const lv of levels) {
    const members = view.nodes.filter((n) => n.level === lv);
    members
      .slice()
      .sort((a, b) => (a.cost - b.cost) || (a.id - b.id))
      .forEach((n, i) => ranks.set(n.id, i + 1));
  }

  const placed: PlacedNode[] = [];
  const pos = new Map<number, { x: number; y: number }>();
  for (const lv of levels) {
    const seq = order.get(lv) ?? [];
    seq.forEach((id, i) => {
      const n = nodeById(view, id)!;
      const x = colX.get(lv)!;
      const y = (height * (i + 1)) / (seq.length + 1);
      pos.set(id, { x, y });
      placed.push({
        id,
        level: lv,
        x,
        y,
        r: NODE_R,
        rank: ranks.get(id)!,
        status: n.status,
        selected: id === view.selection,
      });
    });
  }

  const edges: Array<[number, number]> = [];
  for (const n of view.nodes) {
    if (n.parent !== null) edges.push([n.parent, n.id]);
  }

  const columns: Column[] = levels.map((lv) => ({
    level: lv,
    count: (order.get(lv) ?? []).length,
    x: colX.get(lv)!,
  }));
  return { columns, nodes: placed, edges, width, height };
}

/** Hit test for click-to-select; topmost match wins. */
export function nodeAt(layout: TreeLayout, x: number, y: number): number | null {
  for (let i = layout.nodes.length - 1; i >= 0; i--) {
    const n = layout.nodes[i];
    const dx = x - n.x;
    const dy = y - n.y;
    if (dx * dx + dy * dy <= n.r * n.r) return n.id;
  }
  return null;
}
