import * as tf from "@tensorflow/tfjs";
import "@tensorflow/tfjs-backend-wasm";

let ready: Promise<void> | null = null;

// Prefer the wasm backend; fall back to the pure-JS cpu backend.
export function initBackend(): Promise<void> {
  if (!ready) {
    ready = tf
      .setBackend("wasm")
      .then((ok) => {
        if (!ok) return tf.setBackend("cpu").then(() => undefined);
        return undefined;
      })
      .then(() => tf.ready());
  }
  return ready;
}

export { tf };
