/**
 * Figure builders: each consumes capflow output files and returns SVG text.
 *
 * Builders never mutate their inputs and only the caller writes files, so
 * a failed schema check never leaves a partial image behind.
 */

import { column, parseCsv, requireColumns } from "./csv.js";
import { StateSnapshot } from "./states.js";
import { PanelSpec, Series, renderFigure } from "./svg.js";

export type FigureKind = "monotonicity" | "monitors" | "profiles" | "sweep-summary";

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  output: string;
  xiIndex?: number;
}

function relativeDrift(values: number[]): number {
  const v0 = values[0];
  let worst = 0;
  for (const v of values) worst = Math.max(worst, Math.abs(v - v0));
  return worst / Math.abs(v0);
}

/** One panel per quermassintegral V_k against time; the conserved V_2
 * panel is annotated with its relative drift. */
export function monotonicityFigure(csvText: string): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["t", "V0", "V1", "V2", "V3"]);
  const t = column(table, "t");
  const panels: PanelSpec[] = [];
  for (let k = 0; k <= 3; k++) {
    const vk = column(table, `V${k}`);
    const panel: PanelSpec = {
      title: `V${k}`,
      xlabel: "t",
      ylabel: `V${k}`,
      series: [{ label: `V${k}(t)`, x: t, y: vk }],
    };
    if (k === 2) {
      panel.annotation = `relative drift ${relativeDrift(vk).toExponential(2)} (conserved)`;
    }
    panels.push(panel);
  }
  return renderFigure(panels);
}

/** Monitor time series: curvature-ratio range, curvature extremes,
 * star-shapedness and barrier radii, speed decay and boundary residual. */
export function monitorsFigure(csvText: string): string {
  const table = parseCsv(csvText);
  requireColumns(table, [
    "t", "F_min", "F_max", "kappa_min", "kappa_max", "H_max",
    "support_min", "r_in", "r_out", "max_speed", "bc_residual",
  ]);
  const t = column(table, "t");
  const grab = (name: string): Series => ({ label: name, x: t, y: column(table, name) });
  const log10 = (name: string): Series => ({
    label: `log10 ${name}`,
    x: t,
    y: column(table, name).map((v) => Math.log10(Math.max(v, 1e-300))),
  });
  return renderFigure([
    { title: "speed ratio bounds", xlabel: "t", ylabel: "F", series: [grab("F_min"), grab("F_max")] },
    {
      title: "principal curvature range",
      xlabel: "t",
      ylabel: "kappa",
      series: [grab("kappa_min"), grab("kappa_max"), grab("H_max")],
    },
    {
      title: "support and fitted cap radii",
      xlabel: "t",
      ylabel: "length",
      series: [grab("support_min"), grab("r_in"), grab("r_out")],
    },
    {
      title: "speed decay and boundary residual",
      xlabel: "t",
      ylabel: "log10",
      series: [log10("max_speed"), log10("bc_residual")],
    },
  ]);
}

/** Meridian sections rho(beta) = exp(phi(beta, xi0)) for each snapshot,
 * overlaid with the spherical-cap profile fitted from the last snapshot. */
export function profilesFigure(snapshots: StateSnapshot[], xiIndex = 0): string {
  if (snapshots.length === 0) {
    throw new Error("profiles figure needs at least one snapshot");
  }
  const series: Series[] = snapshots.map((snap, i) => {
    if (xiIndex < 0 || xiIndex >= snap.nXi) {
      throw new Error(`xi index ${xiIndex} out of range 0..${snap.nXi - 1}`);
    }
    const label = snap.time !== undefined ? `t=${snap.time.toFixed(3)}` : `snapshot ${i}`;
    return {
      label,
      x: snap.beta,
      y: snap.beta.map((_, j) => Math.exp(snap.phi[j][xiIndex])),
    };
  });

  // limit cap through the final boundary point: rho(pi/2) = r sin(theta)
  const last = snapshots[snapshots.length - 1];
  const theta = last.theta;
  const rhoEq = Math.exp(last.phi[last.nBeta - 1][xiIndex]);
  const r = rhoEq / Math.sin(theta);
  const capRho = (beta: number) =>
    r * (-Math.cos(theta) * Math.cos(beta) + Math.sqrt(1 - Math.cos(theta) ** 2 * Math.sin(beta) ** 2));
  series.push({
    label: `cap r=${r.toFixed(4)}`,
    x: last.beta,
    y: last.beta.map(capRho),
    color: "#000",
    dashed: true,
  });

  return renderFigure([
    {
      title: `meridian profiles at xi index ${xiIndex} (theta=${theta.toFixed(4)})`,
      xlabel: "beta",
      ylabel: "rho",
      series,
    },
  ]);
}

/** Inequality gaps against perturbation amplitude, one curve per contact
 * angle and inequality, from a sweep summary CSV. */
export function sweepSummaryFigure(csvText: string): string {
  const table = parseCsv(csvText);
  requireColumns(table, ["theta", "amplitude", "af_gap_k0", "af_gap_k1", "willmore_gap", "minkowski_gap"]);
  const thetas = [...new Set(column(table, "theta"))].sort((a, b) => a - b);
  const gapNames = ["af_gap_k0", "af_gap_k1", "willmore_gap", "minkowski_gap"];
  const panels: PanelSpec[] = gapNames.map((gap) => {
    const series: Series[] = thetas.map((theta) => {
      const rows = table.rows
        .map((_, i) => i)
        .filter((i) => table.rows[i][table.columns.indexOf("theta")] === theta)
        .sort(
          (a, b) =>
            table.rows[a][table.columns.indexOf("amplitude")] -
            table.rows[b][table.columns.indexOf("amplitude")],
        );
      return {
        label: `theta=${theta.toFixed(3)}`,
        x: rows.map((i) => table.rows[i][table.columns.indexOf("amplitude")]),
        y: rows.map((i) => Math.log10(Math.max(table.rows[i][table.columns.indexOf(gap)], 1e-300))),
      };
    });
    return { title: gap, xlabel: "amplitude", ylabel: "log10 gap", series };
  });
  return renderFigure(panels);
}
