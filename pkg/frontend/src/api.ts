/** Wire types and HTTP transport for the pathminima session service.
 *
 * Shapes mirror docs/wire-api.md in the backend repo (api_version 1). The
 * Transport interface is the seam tests use to substitute an in-memory
 * service; nothing above it may touch fetch directly.
 */

export const API_VERSION = 1;

export type NodeStatus = 'unexpanded' | 'expanded' | 'spurious';

export interface NodeView {
  id: number;
  level: number;
  parent: number | null;
  status: NodeStatus;
  cost: number;
  children: number[];
}

export interface ExportPayload {
  node: number;
  level: number;
  cost: number;
  waypoints: number[][];
  densified: number[][];
  flag?: string;
}

export interface SessionView {
  selection: number;
  levels: Record<string, number>;
  nodes: NodeView[];
  notice?: string;
  new_nodes?: number[];
  export?: ExportPayload;
}

export interface AxisSpec {
  kind: 'euclidean' | 'circle';
  low?: number;
  high?: number;
  weight?: number;
}

export interface ObstacleSpec {
  type: 'circle' | 'polygon' | 'box' | 'sphere';
  center?: number[];
  radius?: number;
  points?: number[][];
  lo?: number[];
  hi?: number[];
}

export interface RobotSpec {
  type: 'point' | 'disk' | 'rectangle' | 'arm' | 'ball';
  radius?: number;
  width?: number;
  length?: number;
  lengths?: number[];
  widths?: number[];
  base?: number[];
}

export interface ScenarioDoc {
  version: number;
  name: string;
  space: AxisSpec[][];
  world: ObstacleSpec[];
  robot: RobotSpec[];
  bundle: Array<{ type: string; drop?: number[] }>;
  problem: { start: number[]; goal: number[] };
  params?: Record<string, unknown>;
}

export interface CreateSessionRequest {
  scenario?: string;
  scenario_text?: string;
  params?: Record<string, unknown>;
  seed?: number;
}

export interface CreateSessionResponse {
  session: string;
  api_version: number;
  scenario: ScenarioDoc;
  view: SessionView;
}

export interface TreeNodeRec {
  id: number;
  level: number;
  parent: number | null;
  status: NodeStatus;
  attempts: number;
  cost: number;
  waypoints: number[][] | null;
}

export interface TreeDoc {
  format: string;
  version: number;
  scenario: string;
  start: number[];
  goal: number[];
  params: Record<string, unknown>;
  nodes: TreeNodeRec[];
}

export interface TreeResponse {
  tree: TreeDoc;
  selection: number;
  levels: Record<string, number>;
}

export type CommandName =
  | 'select'
  | 'left'
  | 'right'
  | 'up'
  | 'down'
  | 'expand'
  | 'export_selected';

export interface CommandRequest {
  cmd: CommandName;
  id?: number;
  iterations?: number;
  seconds?: number;
}

/** Returned instead of a view when a command starts a background job. */
export interface JobStart {
  job: string;
  selection: number;
}

export interface JobStatus {
  state: 'running' | 'done' | 'failed';
  progress: { iterations: number; candidates: number };
  new_nodes?: number[];
  error?: string;
}

export interface GeometryPayload {
  node: number;
  level: number;
  k_levels: number;
  coords: number[][];
  workspace: number[][];
  robot: RobotSpec;
}

export function isJobStart(r: SessionView | JobStart): r is JobStart {
  return typeof (r as JobStart).job === 'string';
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** 409: an expansion job owns the session right now. */
export class BusyError extends ApiError {}

/** The service did not answer at all (down, refused, network). */
export class ConnectionError extends Error {}

export interface Transport {
  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse>;
  command(session: string, req: CommandRequest): Promise<SessionView | JobStart>;
  job(token: string): Promise<JobStatus>;
  tree(session: string): Promise<TreeResponse>;
  geometry(session: string, node: number, samples?: number): Promise<GeometryPayload>;
}

export class HttpTransport implements Transport {
  constructor(private base: string) {}

  private async req<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await fetch(this.base + path, init);
    } catch (e) {
      throw new ConnectionError(String(e));
    }
    if (!resp.ok) {
      let detail = `${resp.status} ${resp.statusText}`;
      try {
        const body = (await resp.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = String(body.detail);
      } catch {
        // non-JSON error body, keep the status line
      }
      if (resp.status === 409) throw new BusyError(resp.status, detail);
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.req(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.post('/sessions', req);
  }

  command(session: string, req: CommandRequest): Promise<SessionView | JobStart> {
    return this.post(`/sessions/${session}/command`, req);
  }

  job(token: string): Promise<JobStatus> {
    return this.req(`/jobs/${token}`);
  }

  tree(session: string): Promise<TreeResponse> {
    return this.req(`/sessions/${session}/tree`);
  }

  geometry(session: string, node: number, samples = 128): Promise<GeometryPayload> {
    return this.req(`/sessions/${session}/geometry?node=${node}&samples=${samples}`);
  }
}
