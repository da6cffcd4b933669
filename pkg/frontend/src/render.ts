/** Canvas drawing for the tree and workspace panels.
 *
 * No state lives here: callers hand in the current AppState, a fresh
 * layout, and whatever geometry payloads they have cached. Paths are
 * immutable per node id, so cached geometry never goes stale.
 */

import type { GeometryPayload, ObstacleSpec, RobotSpec, ScenarioDoc } from './api.js';
import type { AppState } from './state.js';
import type { TreeLayout } from './layout.js';

const STATUS_FILL: Record<string, string> = {
  unexpanded: '#ffffff',
  expanded: '#cfe3ff',
  spurious: '#e5e7eb',
};

export function drawTree(ctx: CanvasRenderingContext2D, layout: TreeLayout, state: AppState): void {
  ctx.clearRect(0, 0, layout.width, layout.height);
  ctx.font = '12px sans-serif';
  ctx.textAlign = 'center';

  for (const col of layout.columns) {
    ctx.fillStyle = '#6b7280';
    ctx.fillText(`level ${col.level}`, col.x, 16);
    ctx.fillText(`${col.count} node${col.count === 1 ? '' : 's'}`, col.x, 30);
  }

  const byId = new Map(layout.nodes.map((n) => [n.id, n]));
  ctx.strokeStyle = '#9ca3af';
  ctx.lineWidth = 1;
  for (const [p, c] of layout.edges) {
    const a = byId.get(p);
    const b = byId.get(c);
    if (!a || !b) continue;
    ctx.beginPath();
    ctx.moveTo(a.x + a.r, a.y);
    ctx.lineTo(b.x - b.r, b.y);
    ctx.stroke();
  }

  for (const n of layout.nodes) {
    ctx.beginPath();
    ctx.arc(n.x, n.y, n.r, 0, 2 * Math.PI);
    ctx.fillStyle = STATUS_FILL[n.status] ?? '#ffffff';
    ctx.fill();
    ctx.lineWidth = n.selected ? 3 : 1.5;
    ctx.strokeStyle = n.selected ? '#1d4ed8' : n.status === 'spurious' ? '#9ca3af' : '#374151';
    if (n.status === 'spurious') ctx.setLineDash([3, 3]);
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = n.status === 'spurious' ? '#9ca3af' : '#111827';
    ctx.fillText(String(n.rank), n.x, n.y + 4);
    if (state.job && state.job.node === n.id) {
      ctx.fillStyle = '#b45309';
      ctx.fillText(`${state.job.iterations} it`, n.x, n.y - n.r - 6);
    }
  }
}

interface Frame {
  toPx(x: number, y: number): [number, number];
  scale: number;
}

/** Plot window: the bounds of the base level's first two axes when they are
 * Euclidean (all builtin worlds), padded obstacle extents otherwise. */
function frameFor(scenario: ScenarioDoc, width: number, height: number): Frame {
  let x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  const axes = scenario.space[scenario.space.length - 1];
  if (axes.length >= 2 && axes[0].kind === 'euclidean' && axes[1].kind === 'euclidean') {
    x0 = axes[0].low!;
    x1 = axes[0].high!;
    y0 = axes[1].low!;
    y1 = axes[1].high!;
  }
  const pad = 18;
  const scale = Math.min((width - 2 * pad) / (x1 - x0), (height - 2 * pad) / (y1 - y0));
  return {
    scale,
    toPx: (x, y) => [pad + (x - x0) * scale, height - pad - (y - y0) * scale],
  };
}

function drawObstacle(ctx: CanvasRenderingContext2D, ob: ObstacleSpec, f: Frame): void {
  ctx.fillStyle = '#d1d5db';
  ctx.strokeStyle = '#6b7280';
  if (ob.type === 'circle' || ob.type === 'sphere') {
    const [cx, cy] = f.toPx(ob.center![0], ob.center![1]);
    ctx.beginPath();
    ctx.arc(cx, cy, ob.radius! * f.scale, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    return;
  }
  if (ob.type === 'polygon') {
    ctx.beginPath();
    ob.points!.forEach(([x, y], i) => {
      const [px, py] = f.toPx(x, y);
      i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
    });
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
    return;
  }
  // box: draw the xy footprint (top-down view for 3D worlds)
  const [ax, ay] = f.toPx(ob.lo![0], ob.hi![1]);
  const [bx, by] = f.toPx(ob.hi![0], ob.lo![1]);
  ctx.fillRect(ax, ay, bx - ax, by - ay);
  ctx.strokeRect(ax, ay, bx - ax, by - ay);
}

function polyline(ctx: CanvasRenderingContext2D, pts: number[][], f: Frame): void {
  ctx.beginPath();
  pts.forEach((p, i) => {
    const [px, py] = f.toPx(p[0], p[1]);
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function armPoints(robot: RobotSpec, q: number[]): number[][] {
  const pts = [robot.base ?? [0, 0]];
  let angle = 0;
  let [x, y] = pts[0];
  (robot.lengths ?? []).forEach((len, i) => {
    angle += q[i] ?? 0;
    x += len * Math.cos(angle);
    y += len * Math.sin(angle);
    pts.push([x, y]);
  });
  return pts;
}

function drawFootprints(
  ctx: CanvasRenderingContext2D,
  geo: GeometryPayload,
  f: Frame,
  full: boolean,
): void {
  const every = Math.max(1, Math.floor(geo.coords.length / 14));
  // simplified robots (quotient levels) draw solid, the full robot faint
  ctx.strokeStyle = full ? 'rgba(29,78,216,0.35)' : 'rgba(17,24,39,0.55)';
  ctx.lineWidth = 1;
  for (let i = 0; i < geo.coords.length; i += every) {
    const q = geo.coords[i];
    const robot = geo.robot;
    if (robot.type === 'disk' || robot.type === 'ball') {
      const [cx, cy] = f.toPx(q[0], q[1]);
      ctx.beginPath();
      ctx.arc(cx, cy, (robot.radius ?? 0) * f.scale, 0, 2 * Math.PI);
      ctx.stroke();
    } else if (robot.type === 'rectangle') {
      const th = q[2] ?? 0;
      const hw = (robot.width ?? 0) / 2;
      const hl = (robot.length ?? 0) / 2;
      const c = Math.cos(th);
      const s = Math.sin(th);
      const corners = [
        [q[0] + c * hl - s * hw, q[1] + s * hl + c * hw],
        [q[0] - c * hl - s * hw, q[1] - s * hl + c * hw],
        [q[0] - c * hl + s * hw, q[1] - s * hl - c * hw],
        [q[0] + c * hl + s * hw, q[1] + s * hl - c * hw],
      ];
      ctx.beginPath();
      corners.forEach(([x, y], j) => {
        const [px, py] = f.toPx(x, y);
        j === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
      });
      ctx.closePath();
      ctx.stroke();
    } else if (robot.type === 'arm') {
      polyline(ctx, armPoints(robot, q), f);
    }
  }
}

export function drawWorkspace(
  ctx: CanvasRenderingContext2D,
  state: AppState,
  width: number,
  height: number,
  selected: GeometryPayload | null,
  siblings: number[][][],
): void {
  ctx.clearRect(0, 0, width, height);
  if (!state.scenario) return;
  const f = frameFor(state.scenario, width, height);

  for (const ob of state.scenario.world) drawObstacle(ctx, ob, f);

  ctx.lineWidth = 1.5;
  ctx.strokeStyle = 'rgba(107,114,128,0.45)';
  for (const pts of siblings) polyline(ctx, pts, f);

  if (selected) {
    // arm joint paths have no workspace polyline; the footprints carry it
    if (selected.robot.type !== 'arm') {
      ctx.lineWidth = 2.5;
      ctx.strokeStyle = '#1d4ed8';
      polyline(ctx, selected.workspace, f);
    }
    drawFootprints(ctx, selected, f, selected.level === selected.k_levels);
  }

  const { start, goal } = state.scenario.problem;
  for (const [cfg, color] of [
    [start, '#15803d'],
    [goal, '#b91c1c'],
  ] as Array<[number[], string]>) {
    const [px, py] = f.toPx(cfg[0], cfg[1]);
    ctx.beginPath();
    ctx.arc(px, py, 6, 0, 2 * Math.PI);
    ctx.fillStyle = color;
    ctx.fill();
  }
}
