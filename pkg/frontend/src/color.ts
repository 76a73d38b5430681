/** Red color ramp for target-domain intensity.
 *
 * White-space nodes (count 0) are gray. Red-space nodes interpolate
 * linearly from light red at count 1 to saturated red at the maximum
 * count on the map, so intensity is monotone in the count.
 */

export const WHITE_SPACE_GRAY = "#c4c4c4";
export const HIGHLIGHT_STROKE = "#1668c8";

const LIGHT_RED: [number, number, number] = [255, 208, 208];
const DEEP_RED: [number, number, number] = [190, 8, 8];

/** Interpolation parameter in [0, 1]; 0 for count <= 0. */
export function redIntensity(count: number, maxCount: number): number {
  if (count <= 0) return 0;
  if (maxCount <= 1) return 1;
  return Math.min(1, (count - 1) / (maxCount - 1));
}

export function redRamp(count: number, maxCount: number): string {
  if (count <= 0) return WHITE_SPACE_GRAY;
  const t = redIntensity(count, maxCount);
  const channel = (i: number): number => {
    const light = LIGHT_RED[i] ?? 0;
    const deep = DEEP_RED[i] ?? 0;
    return Math.round(light + (deep - light) * t);
  };
  return `rgb(${channel(0)}, ${channel(1)}, ${channel(2)})`;
}
