/**
 * SFF1 field container: 4-byte magic "SFF1", height and width as u32
 * little-endian, then height*width f32 little-endian values, row-major.
 */

export interface BoundField {
  height: number;
  width: number;
  /** Row-major [0, 1] values; length = height * width. Fresh copy per call. */
  data: Float32Array;
}

const MAGIC = 0x31464653; // "SFF1" read as u32le

export function parseSff(bytes: Uint8Array): BoundField {
  if (bytes.byteLength < 12) {
    throw new Error(`SFF1: truncated header (${bytes.byteLength} bytes)`);
  }
  const view = new DataView(bytes.buffer, bytes.byteOffset, bytes.byteLength);
  if (view.getUint32(0, true) !== MAGIC) {
    throw new Error("SFF1: bad magic");
  }
  const height = view.getUint32(4, true);
  const width = view.getUint32(8, true);
  const expected = 12 + 4 * height * width;
  if (bytes.byteLength !== expected) {
    throw new Error(
      `SFF1: payload length ${bytes.byteLength - 12} does not match ` +
        `${height}x${width} header`,
    );
  }
  const data = new Float32Array(height * width);
  for (let i = 0; i < data.length; i++) {
    data[i] = view.getFloat32(12 + 4 * i, true);
  }
  return { height, width, data };
}

export function serializeSff(field: BoundField): Uint8Array {
  const { height, width, data } = field;
  if (data.length !== height * width) {
    throw new Error(`SFF1: buffer length ${data.length} != ${height}x${width}`);
  }
  const out = new Uint8Array(12 + 4 * data.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, MAGIC, true);
  view.setUint32(4, height, true);
  view.setUint32(8, width, true);
  for (let i = 0; i < data.length; i++) {
    view.setFloat32(12 + 4 * i, data[i], true);
  }
  return out;
}
