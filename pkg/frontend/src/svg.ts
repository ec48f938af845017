/**
 * Self-contained SVG chart assembly: line charts with optional min-max
 * bands, and grouped bar charts.  No timestamps, fixed canvas size, so
 * identical inputs give byte-identical figures.
 */

export interface Point {
  x: number;
  y: number;
}

export interface LineSeries {
  label: string;
  color: string;
  points: Point[];
  dash?: string;
  width?: number;
}

/** Shaded region between lower and upper, e.g. a min-max band. */
export interface BandSeries {
  label: string;
  color: string;
  lower: Point[];
  upper: Point[];
}

export interface LineChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  series: LineSeries[];
  bands?: BandSeries[];
  yMin?: number;
  yMax?: number;
}

export interface Bar {
  label: string;
  color: string;
  value: number | null; // null leaves a gap in the group
}

export interface BarGroup {
  x: string;
  bars: Bar[];
}

export interface BarChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  groups: BarGroup[];
  legend: { label: string; color: string }[];
}

const W = 700;
const H = 300;
const ML = 52;
const MR = 16;
const MT = 30;
const MB = 44;
const PW = W - ML - MR;
const PH = H - MT - MB;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  if (Number.isInteger(v) && Math.abs(v) < 1e6) return String(v);
  return v.toPrecision(3).replace(/\.?0+$/, "");
}

function open(title: string): string {
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="${MT - 12}" font-size="11" font-weight="600" fill="#222">${esc(title)}</text>\n`;
  return s;
}

function frameAndXLabel(xLabel: string): string {
  let s = `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<text x="${ML + PW / 2}" y="${H - 6}" text-anchor="middle" font-size="9" fill="#444">${esc(xLabel)}</text>\n`;
  return s;
}

function yAxis(yMin: number, yMax: number, yLabel: string, yOf: (v: number) => number): string {
  let s = "";
  for (const v of niceTicks(yMin, yMax, 5)) {
    const y = yOf(v).toFixed(1);
    s += `<line x1="${ML}" y1="${y}" x2="${ML + PW}" y2="${y}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<line x1="${ML - 3}" y1="${y}" x2="${ML}" y2="${y}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${ML - 5}" y="${(yOf(v) + 3).toFixed(1)}" text-anchor="end" font-size="7.5" fill="#555">${esc(fmt(v))}</text>\n`;
  }
  s += `<text x="13" y="${MT + PH / 2}" text-anchor="middle" font-size="9" fill="#444" transform="rotate(-90,13,${MT + PH / 2})">${esc(yLabel)}</text>\n`;
  return s;
}

function legendBox(entries: { label: string; color: string; dash?: string }[]): string {
  if (entries.length === 0) return "";
  const lw = Math.max(...entries.map((e) => e.label.length)) * 4.6 + 26;
  const lx = ML + PW - lw - 4;
  const ly = MT + 4;
  let s = `<rect x="${lx}" y="${ly}" width="${lw}" height="${entries.length * 12 + 6}" rx="2" fill="#fff" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
  entries.forEach((e, i) => {
    const yy = ly + 9 + i * 12;
    s += `<line x1="${lx + 5}" y1="${yy}" x2="${lx + 19}" y2="${yy}" stroke="${e.color}" stroke-width="1.5" ${e.dash ? `stroke-dasharray="${e.dash}"` : ""}/>\n`;
    s += `<text x="${lx + 23}" y="${yy + 3}" font-size="7.5" fill="#444">${esc(e.label)}</text>\n`;
  });
  return s;
}

export function buildLineChart(opts: LineChartOpts): string {
  const all = [
    ...opts.series.flatMap((s) => s.points),
    ...(opts.bands ?? []).flatMap((b) => [...b.lower, ...b.upper]),
  ];
  if (all.length === 0) {
    throw new Error(`chart "${opts.title}": no points to plot`);
  }
  const xMin = Math.min(...all.map((p) => p.x));
  const xMax = Math.max(...all.map((p) => p.x));
  const yMin = opts.yMin ?? Math.min(...all.map((p) => p.y));
  const yMax = opts.yMax ?? (Math.max(...all.map((p) => p.y)) * 1.05 || 1);
  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * PW;
  const yOf = (v: number) => MT + PH - ((v - yMin) / (yMax - yMin || 1)) * PH;
  const pts = (points: Point[]) =>
    points.map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`).join(" ");

  let s = open(opts.title);
  s += yAxis(yMin, yMax, opts.yLabel, yOf);

  for (const band of opts.bands ?? []) {
    const ring = [...band.lower, ...[...band.upper].reverse()];
    s += `<polygon fill="${band.color}" opacity="0.15" points="${pts(ring)}"/>\n`;
  }
  for (const series of opts.series) {
    s += `<polyline fill="none" stroke="${series.color}" stroke-width="${series.width ?? 1.3}" ${series.dash ? `stroke-dasharray="${series.dash}"` : ""} points="${pts(series.points)}"/>\n`;
  }

  s += frameAndXLabel(opts.xLabel);
  for (const v of niceTicks(xMin, xMax, 8)) {
    const x = xOf(v).toFixed(1);
    s += `<line x1="${x}" y1="${MT + PH}" x2="${x}" y2="${MT + PH + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x}" y="${MT + PH + 13}" text-anchor="middle" font-size="7.5" fill="#555">${esc(fmt(v))}</text>\n`;
  }
  s += legendBox(opts.series.map((e) => ({ label: e.label, color: e.color, dash: e.dash })));
  s += `</svg>\n`;
  return s;
}

export function buildBarChart(opts: BarChartOpts): string {
  if (opts.groups.length === 0) {
    throw new Error(`chart "${opts.title}": no bar groups to plot`);
  }
  const values = opts.groups.flatMap((g) => g.bars.map((b) => b.value)).filter((v): v is number => v !== null);
  const yMin = 0;
  const yMax = Math.max(...values, 0) * 1.05 || 1;
  const yOf = (v: number) => MT + PH - ((v - yMin) / (yMax - yMin)) * PH;

  const groupW = PW / opts.groups.length;
  const slotCount = Math.max(...opts.groups.map((g) => g.bars.length));
  const barW = (groupW * 0.8) / slotCount;

  let s = open(opts.title);
  s += yAxis(yMin, yMax, opts.yLabel, yOf);

  opts.groups.forEach((group, gi) => {
    const gx = ML + gi * groupW + groupW * 0.1;
    group.bars.forEach((bar, bi) => {
      if (bar.value === null) return; // absent bin leaves a gap
      const x = gx + bi * barW;
      const y = yOf(bar.value);
      const h = MT + PH - y;
      s += `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${(barW * 0.92).toFixed(1)}" height="${h.toFixed(1)}" fill="${bar.color}"/>\n`;
    });
    s += `<text x="${(ML + gi * groupW + groupW / 2).toFixed(1)}" y="${MT + PH + 13}" text-anchor="middle" font-size="7.5" fill="#555">${esc(group.x)}</text>\n`;
  });

  s += frameAndXLabel(opts.xLabel);
  s += legendBox(opts.legend);
  s += `</svg>\n`;
  return s;
}
