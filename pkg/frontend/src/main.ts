/** Browser entry point: wires DOM, keyboard, and canvases to a Controller.
 *
 * Served as plain ES modules (dist/) from any static file server; the
 * service base URL comes from the `api` query parameter so the same build
 * can point at any running backend.
 */

import { HttpTransport, type GeometryPayload, type ScenarioDoc } from './api.js';
import { Controller } from './controller.js';
import { layoutTree, nodeAt, type TreeLayout } from './layout.js';
import { drawTree, drawWorkspace } from './render.js';
import { selectedNode, type AppState } from './state.js';

const BUILTINS = [
  'builtin:planar_car',
  'builtin:planar_manipulator_2dof',
  'builtin:ball_sphere_3d',
  'builtin:ball_lattice_3d',
  'builtin:empty_2d',
];

const qs = new URLSearchParams(window.location.search);
const base = qs.get('api') ?? 'http://127.0.0.1:8703';
const transport = new HttpTransport(base);

const el = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;
const treeCanvas = el<HTMLCanvasElement>('tree');
const wsCanvas = el<HTMLCanvasElement>('workspace');
const scenarioSel = el<HTMLSelectElement>('scenario');
const seedInput = el<HTMLInputElement>('seed');
const statusLine = el<HTMLDivElement>('status');
const noticeLine = el<HTMLDivElement>('notice');
const bannerBox = el<HTMLDivElement>('banner');
const bannerText = el<HTMLSpanElement>('banner-text');

for (const name of BUILTINS) {
  const opt = document.createElement('option');
  opt.value = name;
  opt.textContent = name.replace('builtin:', '');
  scenarioSel.appendChild(opt);
}

// geometry is immutable per node id, so one fetch per node is enough
const geoCache = new Map<number, GeometryPayload>();
let lastLayout: TreeLayout | null = null;
let drawQueued = false;

const controller = new Controller(transport, {
  onExport: saveFile,
  onChange: scheduleDraw,
});

function saveFile(filename: string, text: string): void {
  const blob = new Blob([text], { type: 'text/csv' });
  const url = URL.createObjectURL(blob);
  const a = document.createElement('a');
  a.href = url;
  a.download = filename;
  a.click();
  URL.revokeObjectURL(url);
}

function scheduleDraw(): void {
  if (drawQueued) return;
  drawQueued = true;
  requestAnimationFrame(() => {
    drawQueued = false;
    draw(controller.state);
  });
}

async function geometryFor(id: number): Promise<GeometryPayload | null> {
  const hit = geoCache.get(id);
  if (hit) return hit;
  if (!controller.state.session) return null;
  try {
    const geo = await transport.geometry(controller.state.session, id, 160);
    geoCache.set(id, geo);
    return geo;
  } catch {
    return null;
  }
}

function draw(state: AppState): void {
  const tctx = treeCanvas.getContext('2d')!;
  const wctx = wsCanvas.getContext('2d')!;

  statusLine.textContent = state.session
    ? `session ${state.session}` +
      (state.lastKey ? `  ·  key: ${state.lastKey}` : '') +
      (state.job ? `  ·  expanding (${state.job.iterations} it, ${state.job.candidates} cand)` : '')
    : 'no session';
  noticeLine.textContent = state.notice ?? '';
  bannerBox.style.display = state.banner ? 'flex' : 'none';
  bannerText.textContent = state.banner ?? '';

  if (!state.view) {
    tctx.clearRect(0, 0, treeCanvas.width, treeCanvas.height);
    wctx.clearRect(0, 0, wsCanvas.width, wsCanvas.height);
    lastLayout = null;
    return;
  }

  lastLayout = layoutTree(state.view, treeCanvas.width, treeCanvas.height);
  drawTree(tctx, lastLayout, state);

  const sel = selectedNode(state);
  if (!sel || sel.parent === null) {
    // root has no path; show just the world
    drawWorkspace(wctx, state, wsCanvas.width, wsCanvas.height, null, []);
    return;
  }
  const sibIds = state.view.nodes
    .filter((n) => n.parent === sel.parent && n.id !== sel.id && n.status !== 'spurious')
    .map((n) => n.id);
  void Promise.all([geometryFor(sel.id), ...sibIds.map(geometryFor)]).then(([own, ...sibs]) => {
    if (selectedNode(controller.state)?.id !== sel.id) return; // stale
    const sibLines = sibs.filter((g): g is GeometryPayload => g !== null).map((g) => g.workspace);
    drawWorkspace(wctx, controller.state, wsCanvas.width, wsCanvas.height, own, sibLines);
  });
}

function persist(): void {
  const { session, scenario } = controller.state;
  if (session && scenario) {
    sessionStorage.setItem('pathminima', JSON.stringify({ session, scenario }));
  }
}

async function newSession(): Promise<void> {
  geoCache.clear();
  const seed = Number.parseInt(seedInput.value, 10);
  await controller.start({
    scenario: scenarioSel.value,
    seed: Number.isFinite(seed) ? seed : 0,
  });
  persist();
}

el<HTMLButtonElement>('new-session').addEventListener('click', () => void newSession());
el<HTMLButtonElement>('banner-retry').addEventListener('click', () => void controller.refresh());

window.addEventListener('keydown', (ev) => {
  const target = ev.target as HTMLElement | null;
  if (target && ['INPUT', 'SELECT', 'TEXTAREA'].includes(target.tagName)) return;
  if (ev.key.startsWith('Arrow')) ev.preventDefault();
  void controller.handleKey(ev.key);
});

treeCanvas.addEventListener('click', (ev) => {
  if (!lastLayout) return;
  const rect = treeCanvas.getBoundingClientRect();
  const id = nodeAt(lastLayout, ev.clientX - rect.left, ev.clientY - rect.top);
  if (id !== null) void controller.select(id);
});

// page refresh rejoins the previous session when the service still has it
const saved = sessionStorage.getItem('pathminima');
if (saved) {
  try {
    const { session, scenario } = JSON.parse(saved) as { session: string; scenario: ScenarioDoc };
    void controller.rejoin(session, scenario);
  } catch {
    sessionStorage.removeItem('pathminima');
  }
}

scheduleDraw();
