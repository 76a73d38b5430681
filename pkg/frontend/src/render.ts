import { HIGHLIGHT_STROKE } from "./color.js";
import type { MapViewModel, NodeView } from "./viewmodel.js";

/** Pan/zoom camera over the unit-square layout (no client relayout). */
export interface Camera {
  scale: number;
  tx: number;
  ty: number;
}

const MIN_SCALE = 0.4;
const MAX_SCALE = 40;

export function fitCamera(width: number, height: number): Camera {
  const margin = 40;
  const scale = Math.min(width, height) - 2 * margin;
  return {
    scale,
    tx: (width - scale) / 2,
    ty: (height - scale) / 2,
  };
}

export function worldToScreen(cam: Camera, x: number, y: number): [number, number] {
  return [cam.tx + x * cam.scale, cam.ty + (1 - y) * cam.scale]; // y up
}

export function zoomAt(cam: Camera, px: number, py: number, factor: number): Camera {
  const scale = Math.max(MIN_SCALE * 100, Math.min(MAX_SCALE * 100, cam.scale * factor));
  const applied = scale / cam.scale;
  return {
    scale,
    tx: px - (px - cam.tx) * applied,
    ty: py - (py - cam.ty) * applied,
  };
}

export function pickNode(vm: MapViewModel, cam: Camera, px: number, py: number): NodeView | null {
  let best: NodeView | null = null;
  let bestDist = Infinity;
  for (const node of vm.nodes) {
    const [sx, sy] = worldToScreen(cam, node.x, node.y);
    const dist = Math.hypot(px - sx, py - sy);
    if (dist <= node.radius + 4 && dist < bestDist) {
      best = node;
      bestDist = dist;
    }
  }
  return best;
}

export function drawMap(
  ctx: CanvasRenderingContext2D,
  vm: MapViewModel,
  cam: Camera,
  width: number,
  height: number,
  selected: string | null,
): void {
  ctx.clearRect(0, 0, width, height);

  ctx.lineCap = "round";
  for (const edge of vm.edges) {
    const [ax, ay] = worldToScreen(cam, edge.ax, edge.ay);
    const [bx, by] = worldToScreen(cam, edge.bx, edge.by);
    ctx.strokeStyle = edge.reason === "spanning-tree" ? "#9fb4c8" : "#d4dde6";
    ctx.lineWidth = 0.5 + 2.5 * edge.phi;
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
    ctx.stroke();
  }

  const labelScale = cam.scale > 500 ? 11 : 10;
  for (const node of vm.nodes) {
    const [sx, sy] = worldToScreen(cam, node.x, node.y);
    ctx.beginPath();
    ctx.arc(sx, sy, node.radius, 0, Math.PI * 2);
    ctx.fillStyle = node.fill;
    ctx.fill();
    if (node.highlighted) {
      ctx.lineWidth = 3;
      ctx.strokeStyle = HIGHLIGHT_STROKE;
      ctx.stroke();
    }
    if (node.code === selected) {
      ctx.lineWidth = 2;
      ctx.strokeStyle = "#222";
      ctx.stroke();
    }
    ctx.fillStyle = "#333";
    ctx.font = `${labelScale}px system-ui, sans-serif`;
    ctx.textAlign = "center";
    ctx.fillText(node.code, sx, sy - node.radius - 4);
  }
}

/** Wire pointer pan and wheel zoom; calls back on every camera change. */
export function attachInteraction(
  canvas: HTMLCanvasElement,
  getCamera: () => Camera,
  setCamera: (cam: Camera) => void,
  onPick: (px: number, py: number) => void,
): void {
  let dragging = false;
  let moved = false;
  let lastX = 0;
  let lastY = 0;

  canvas.addEventListener("pointerdown", (ev) => {
    dragging = true;
    moved = false;
    lastX = ev.offsetX;
    lastY = ev.offsetY;
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    const dx = ev.offsetX - lastX;
    const dy = ev.offsetY - lastY;
    if (Math.abs(dx) + Math.abs(dy) > 2) moved = true;
    lastX = ev.offsetX;
    lastY = ev.offsetY;
    const cam = getCamera();
    setCamera({ ...cam, tx: cam.tx + dx, ty: cam.ty + dy });
  });
  canvas.addEventListener("pointerup", (ev) => {
    dragging = false;
    if (!moved) onPick(ev.offsetX, ev.offsetY);
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    setCamera(zoomAt(getCamera(), ev.offsetX, ev.offsetY, factor));
  });
}
