import { defineConfig } from "vitest/config";

export default defineConfig({
  base: "./",
  build: {
    outDir: "dist",
    emptyOutDir: true,
    // the server reserves /assets for the export's sample images, so the
    // app bundle must live under a different path
    assetsDir: "static",
  },
  server: {
    // during development, proxy API calls to a running `napkit serve`
    proxy: {
      "/api": "http://127.0.0.1:8080",
      "/assets": "http://127.0.0.1:8080",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});
