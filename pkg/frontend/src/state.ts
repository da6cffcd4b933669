/** Client session state as pure data.
 *
 * Every field is derived from wire payloads, never mutated in place, so a
 * refreshed tab that replays createSession/tree produces the identical
 * display. The controller is the only writer.
 */

import type {
  NodeView,
  ScenarioDoc,
  SessionView,
  TreeDoc,
} from './api.js';

export interface JobInfo {
  token: string;
  node: number;
  iterations: number;
  candidates: number;
}

export interface AppState {
  session: string | null;
  scenario: ScenarioDoc | null;
  view: SessionView | null;
  job: JobInfo | null;
  lastKey: string | null;
  notice: string | null;
  banner: string | null;
}

export function initialState(): AppState {
  return {
    session: null,
    scenario: null,
    view: null,
    job: null,
    lastKey: null,
    notice: null,
    banner: null,
  };
}

export function connected(
  s: AppState,
  session: string,
  scenario: ScenarioDoc,
  view: SessionView,
): AppState {
  return { ...s, session, scenario, view, job: null, notice: view.notice ?? null, banner: null };
}

export function withView(s: AppState, view: SessionView): AppState {
  return { ...s, view, notice: view.notice ?? null, banner: null };
}

export function withKey(s: AppState, key: string): AppState {
  return { ...s, lastKey: key };
}

export function withNotice(s: AppState, notice: string | null): AppState {
  return { ...s, notice };
}

export function withBanner(s: AppState, banner: string | null): AppState {
  return { ...s, banner };
}

export function withJob(s: AppState, token: string, node: number): AppState {
  return { ...s, job: { token, node, iterations: 0, candidates: 0 }, notice: null };
}

export function withProgress(
  s: AppState,
  progress: { iterations: number; candidates: number },
): AppState {
  if (!s.job) return s;
  return { ...s, job: { ...s.job, ...progress } };
}

export function jobDone(s: AppState): AppState {
  return { ...s, job: null };
}

export function nodeById(view: SessionView, id: number): NodeView | undefined {
  return view.nodes.find((n) => n.id === id);
}

export function selectedNode(s: AppState): NodeView | undefined {
  if (!s.view) return undefined;
  return nodeById(s.view, s.view.selection);
}

/** Per-level node counts, ascending by level. */
export function shapeOf(view: SessionView): Array<{ level: number; count: number }> {
  const counts = new Map<number, number>();
  for (const n of view.nodes) counts.set(n.level, (counts.get(n.level) ?? 0) + 1);
  return [...counts.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([level, count]) => ({ level, count }));
}

/** Rebuild a SessionView from a serialized tree document.
 *
 * Child lists are not stored in the document; they are reconstructed from
 * parent links and ordered by (cost, id), matching the server's own views.
 */
export function viewFromTree(doc: TreeDoc, selection: number): SessionView {
  const children = new Map<number, number[]>();
  const cost = new Map<number, number>();
  for (const rec of doc.nodes) cost.set(rec.id, rec.cost);
  for (const rec of doc.nodes) {
    if (rec.parent === null) continue;
    const sibs = children.get(rec.parent) ?? [];
    sibs.push(rec.id);
    children.set(rec.parent, sibs);
  }
  for (const sibs of children.values()) {
    sibs.sort((a, b) => (cost.get(a)! - cost.get(b)!) || (a - b));
  }
  const nodes: NodeView[] = [...doc.nodes]
    .sort((a, b) => a.id - b.id)
    .map((rec) => ({
      id: rec.id,
      level: rec.level,
      parent: rec.parent,
      status: rec.status,
      cost: rec.cost,
      children: children.get(rec.id) ?? [],
    }));
  const levels: Record<string, number> = {};
  for (const { level, count } of shapeOf({ selection, levels: {}, nodes })) {
    levels[String(level)] = count;
  }
  return { selection, levels, nodes };
}
