// Chart data and rendering.  The store holds exactly the values received
// from the streams -- appending is the only mutation, and points arrive in
// event order.  The canvas renderer maps stored values to pixels; that is
// display scaling, not recomputation.

export interface SeriesPoint {
  t: number;
  value: number;
}

export class SeriesStore {
  readonly nominal: SeriesPoint[] = [];
  readonly sensor: SeriesPoint[] = [];
  private readonly maxPoints: number;

  constructor(maxPoints = 2000) {
    this.maxPoints = maxPoints;
  }

  /** Append one stream event's values; nulls (failed system) are skipped. */
  append(t: number, nominal: number | null, sensor: number | null): void {
    if (nominal !== null && Number.isFinite(nominal)) {
      this.push(this.nominal, { t, value: nominal });
    }
    if (sensor !== null && Number.isFinite(sensor)) {
      this.push(this.sensor, { t, value: sensor });
    }
  }

  private push(series: SeriesPoint[], point: SeriesPoint): void {
    series.push(point);
    if (series.length > this.maxPoints) series.shift();
  }

  clear(): void {
    this.nominal.length = 0;
    this.sensor.length = 0;
  }
}

const NOMINAL_COLOR = "#4f8ef7";
const SENSOR_COLOR = "#f2994a";

export class LineChart {
  private readonly canvas: HTMLCanvasElement;
  private readonly label: string;

  constructor(canvas: HTMLCanvasElement, label: string) {
    this.canvas = canvas;
    this.label = label;
  }

  render(store: SeriesStore): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    ctx.fillStyle = "#151a21";
    ctx.fillRect(0, 0, width, height);

    const all = store.nominal.concat(store.sensor);
    ctx.fillStyle = "#8b98a9";
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(this.label, 8, 16);
    if (all.length === 0) {
      ctx.fillText("waiting for events...", 8, height / 2);
      return;
    }

    let tMin = Infinity;
    let tMax = -Infinity;
    let vMin = Infinity;
    let vMax = -Infinity;
    for (const p of all) {
      tMin = Math.min(tMin, p.t);
      tMax = Math.max(tMax, p.t);
      vMin = Math.min(vMin, p.value);
      vMax = Math.max(vMax, p.value);
    }
    if (tMax === tMin) tMax = tMin + 1e-9;
    if (vMax === vMin) {
      vMax += Math.abs(vMax) * 1e-6 + 1e-12;
      vMin -= Math.abs(vMin) * 1e-6 + 1e-12;
    }

    const pad = 24;
    const x = (t: number) => pad + ((t - tMin) / (tMax - tMin)) * (width - 2 * pad);
    const y = (v: number) =>
      height - pad - ((v - vMin) / (vMax - vMin)) * (height - 2 * pad);

    const drawSeries = (points: SeriesPoint[], color: string) => {
      if (points.length === 0) return;
      ctx.strokeStyle = color;
      ctx.lineWidth = 1.5;
      ctx.beginPath();
      points.forEach((p, i) => {
        if (i === 0) ctx.moveTo(x(p.t), y(p.value));
        else ctx.lineTo(x(p.t), y(p.value));
      });
      ctx.stroke();
    };
    drawSeries(store.nominal, NOMINAL_COLOR);
    drawSeries(store.sensor, SENSOR_COLOR);

    ctx.fillStyle = "#8b98a9";
    ctx.fillText(`min ${formatValue(vMin)}  max ${formatValue(vMax)}`, 8, height - 8);
    const last = store.nominal[store.nominal.length - 1];
    const lastSensor = store.sensor[store.sensor.length - 1];
    if (last) {
      ctx.fillStyle = NOMINAL_COLOR;
      ctx.fillText(`nominal ${formatValue(last.value)}`, width - 170, 16);
    }
    if (lastSensor) {
      ctx.fillStyle = SENSOR_COLOR;
      ctx.fillText(`sensor ${formatValue(lastSensor.value)}`, width - 170, 32);
    }
  }
}

export function formatValue(v: number): string {
  return v.toExponential(6);
}
