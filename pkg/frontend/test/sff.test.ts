import assert from "node:assert/strict";
import { test } from "node:test";

import { parseSff, serializeSff } from "../src/sff.js";

test("28-byte layout for a 2x2 field, hand-assembled", () => {
  const field = {
    height: 2,
    width: 2,
    data: Float32Array.from([0.0, 0.5, 0.25, 1.0]),
  };
  const bytes = serializeSff(field);
  assert.equal(bytes.length, 28);
  const expected = Buffer.concat([
    Buffer.from("SFF1", "ascii"),
    Buffer.from([2, 0, 0, 0, 2, 0, 0, 0]),
    Buffer.from("00000000", "hex"),
    Buffer.from("0000003f", "hex"),
    Buffer.from("0000803e", "hex"),
    Buffer.from("0000803f", "hex"),
  ]);
  assert.deepEqual(Buffer.from(bytes), expected);
});

test("round trip preserves every f32 bit", () => {
  const data = new Float32Array(63);
  for (let i = 0; i < data.length; i++) data[i] = Math.fround(Math.sin(i) * 0.5 + 0.5);
  const back = parseSff(serializeSff({ height: 9, width: 7, data }));
  assert.equal(back.height, 9);
  assert.equal(back.width, 7);
  assert.deepEqual(back.data, data);
});

test("bad magic rejected", () => {
  const bytes = serializeSff({ height: 1, width: 1, data: Float32Array.from([0]) });
  bytes[0] = 0x58;
  assert.throws(() => parseSff(bytes), /magic/);
});

test("truncated payload rejected", () => {
  const bytes = serializeSff({ height: 2, width: 2, data: new Float32Array(4) });
  assert.throws(() => parseSff(bytes.subarray(0, 20)), /payload/);
});

test("length mismatch rejected on serialize", () => {
  assert.throws(
    () => serializeSff({ height: 2, width: 2, data: new Float32Array(3) }),
    /length/,
  );
});
