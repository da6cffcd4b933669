/** Glue between keyboard, transport, and state.
 *
 * The controller never edits the tree client-side: every change round-trips
 * through the service and the stored view is replaced wholesale. While an
 * expansion job runs, key commands degrade to a local notice (the server
 * would answer 409 anyway) and the job is polled until it settles.
 */

import {
  API_VERSION,
  ApiError,
  BusyError,
  ConnectionError,
  isJobStart,
  type CreateSessionRequest,
  type JobStatus,
  type ScenarioDoc,
  type SessionView,
  type Transport,
} from './api.js';
import { exportFilename, waypointsCsv } from './download.js';
import { keyToCommand } from './keymap.js';
import {
  connected,
  initialState,
  jobDone,
  viewFromTree,
  withBanner,
  withJob,
  withKey,
  withNotice,
  withProgress,
  withView,
  type AppState,
} from './state.js';

export interface ControllerOptions {
  pollMs?: number;
  sleep?: (ms: number) => Promise<void>;
  onExport?: (filename: string, text: string) => void;
  onChange?: (state: AppState) => void;
}

const realSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export class Controller {
  state: AppState = initialState();

  constructor(private transport: Transport, private opts: ControllerOptions = {}) {}

  private set(next: AppState): void {
    this.state = next;
    this.opts.onChange?.(next);
  }

  async start(req: CreateSessionRequest): Promise<void> {
    try {
      const resp = await this.transport.createSession(req);
      if (resp.api_version !== API_VERSION) {
        this.set(withBanner(this.state, `service speaks api ${resp.api_version}, client needs ${API_VERSION}`));
        return;
      }
      this.set(connected(this.state, resp.session, resp.scenario, resp.view));
    } catch (e) {
      this.fail(e);
    }
  }

  /** Rejoin an existing session (page refresh): rebuild the view from the
   * served tree document; the scenario doc comes from session storage. */
  async rejoin(session: string, scenario: ScenarioDoc): Promise<void> {
    try {
      const t = await this.transport.tree(session);
      this.set(connected(this.state, session, scenario, viewFromTree(t.tree, t.selection)));
    } catch (e) {
      this.fail(e);
    }
  }

  async handleKey(key: string): Promise<void> {
    this.set(withKey(this.state, key));
    const cmd = keyToCommand(key);
    if (!cmd || !this.state.session || !this.state.view) return;
    if (this.state.job) {
      this.set(withNotice(this.state, 'expansion running, command ignored'));
      return;
    }
    if (cmd === 'expand') return this.expandSelected();
    try {
      const resp = await this.transport.command(this.state.session, { cmd });
      const view = resp as SessionView;
      if (cmd === 'export_selected' && view.export) {
        this.opts.onExport?.(exportFilename(view.export), waypointsCsv(view.export));
      }
      this.set(withView(this.state, view));
    } catch (e) {
      this.fail(e);
    }
  }

  async select(id: number): Promise<void> {
    if (!this.state.session || this.state.job) return;
    try {
      const resp = await this.transport.command(this.state.session, { cmd: 'select', id });
      this.set(withView(this.state, resp as SessionView));
    } catch (e) {
      this.fail(e);
    }
  }

  private async expandSelected(): Promise<void> {
    const session = this.state.session!;
    let started;
    try {
      started = await this.transport.command(session, { cmd: 'expand' });
    } catch (e) {
      return this.fail(e);
    }
    if (!isJobStart(started)) {
      // service answered synchronously; nothing to poll
      this.set(withView(this.state, started));
      return;
    }
    this.set(withJob(this.state, started.job, started.selection));
    const sleep = this.opts.sleep ?? realSleep;
    const pollMs = this.opts.pollMs ?? 250;
    for (;;) {
      await sleep(pollMs);
      let st: JobStatus;
      try {
        st = await this.transport.job(started.job);
      } catch (e) {
        return this.fail(e);
      }
      if (st.state === 'running') {
        this.set(withProgress(this.state, st.progress));
        continue;
      }
      if (st.state === 'failed') {
        this.set(withBanner(jobDone(this.state), `expansion failed: ${st.error ?? 'unknown'}`));
        return;
      }
      break;
    }
    await this.refresh();
  }

  /** Re-fetch the tree and rebuild the view (also the banner retry path). */
  async refresh(): Promise<void> {
    if (!this.state.session) return;
    try {
      const t = await this.transport.tree(this.state.session);
      this.set(jobDone(withView(this.state, viewFromTree(t.tree, t.selection))));
    } catch (e) {
      this.fail(e);
    }
  }

  private fail(e: unknown): void {
    if (e instanceof BusyError) {
      this.set(withNotice(this.state, `service busy: ${e.message}`));
    } else if (e instanceof ConnectionError) {
      this.set(withBanner(this.state, 'connection lost'));
    } else if (e instanceof ApiError) {
      this.set(withNotice(this.state, e.message));
    } else {
      throw e;
    }
  }
}
