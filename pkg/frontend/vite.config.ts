import { defineConfig } from "vitest/config";

export default defineConfig({
  build: { target: "es2022" },
  server: {
    // Dev convenience: /v1/* proxies to a local node so the console can be
    // served from the Vite origin without CORS setup.
    proxy: { "/v1": process.env.PCHAIN_NODE_URL ?? "http://127.0.0.1:8545" },
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    // The parity suite boots real node processes and replays two full
    // lifecycles; give it room.
    testTimeout: 120_000,
    hookTimeout: 60_000,
  },
});
