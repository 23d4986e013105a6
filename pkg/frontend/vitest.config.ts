import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    // The UI test boots a real search service, which indexes its corpus on
    // startup; give hooks room for that.
    testTimeout: 120_000,
    hookTimeout: 180_000,
  },
});
