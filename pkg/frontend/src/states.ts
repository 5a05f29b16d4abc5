/**
 * Parser for capflow state snapshot files ("capflow-state 1").
 *
 * A snapshot holds the log-radial field phi on the (beta, xi) grid plus
 * derived per-node columns; figures only need beta, xi, and phi.
 */

export interface StateSnapshot {
  theta: number;
  nBeta: number;
  nXi: number;
  axisymmetric: boolean;
  beta: number[]; // latitude ladder, ascending, last entry pi/2
  xi: number[];
  phi: number[][]; // [nBeta][nXi]
  /** time parsed from a snap_NNNN_t<t>.txt file name, if present */
  time?: number;
}

export class StateFormatError extends Error {}

const MAGIC = "# capflow-state 1";

export function parseState(text: string, sourceName = "state"): StateSnapshot {
  const lines = text.split(/\r?\n/);
  if (lines[0] !== MAGIC) {
    throw new StateFormatError(`${sourceName}: missing '${MAGIC}' header`);
  }
  const header: Record<string, string> = {};
  const nodes: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0) continue;
    if (line.startsWith("#")) {
      const m = line.slice(1).match(/^\s*([\w-]+)\s*=\s*(.*)$/);
      if (m) header[m[1]] = m[2].trim();
      continue;
    }
    const parts = line.split(/\s+/);
    if (parts.length !== 7) {
      throw new StateFormatError(`${sourceName}:${i + 1}: expected 7 columns, found ${parts.length}`);
    }
    nodes.push(parts.map(Number));
  }
  for (const key of ["theta", "n_beta", "n_xi"]) {
    if (!(key in header)) {
      throw new StateFormatError(`${sourceName}: header is missing ${key}`);
    }
  }
  const nBeta = Number(header["n_beta"]);
  const nXi = Number(header["n_xi"]);
  if (nodes.length !== nBeta * nXi) {
    throw new StateFormatError(
      `${sourceName}: expected ${nBeta * nXi} node rows for ${nBeta}x${nXi}, found ${nodes.length}`,
    );
  }
  const beta: number[] = [];
  const xi: number[] = [];
  const phi: number[][] = [];
  for (let j = 0; j < nBeta; j++) {
    beta.push(nodes[j * nXi][0]);
    phi.push(nodes.slice(j * nXi, (j + 1) * nXi).map((row) => row[2]));
  }
  for (let k = 0; k < nXi; k++) {
    xi.push(nodes[k][1]);
  }
  return {
    theta: Number(header["theta"]),
    nBeta,
    nXi,
    axisymmetric: header["axisymmetric"] === "1",
    beta,
    xi,
    phi,
  };
}

/** Extract the time embedded in snapshot file names like snap_0002_t0.84.txt. */
export function timeFromName(name: string): number | undefined {
  const m = name.match(/_t([0-9]+(?:\.[0-9]+)?)\.txt$/);
  return m ? Number(m[1]) : undefined;
}
