/** Export payloads become plain CSV so the file opens anywhere. */

import type { ExportPayload } from './api.js';

export function waypointsCsv(exp: ExportPayload): string {
  // densified rows: endpoints are exact, interior is uniformly resampled
  const rows = exp.densified.map((row) => row.map((v) => String(v)).join(','));
  return rows.join('\n') + '\n';
}

export function exportFilename(exp: ExportPayload): string {
  return `path_node${exp.node}_level${exp.level}.csv`;
}
