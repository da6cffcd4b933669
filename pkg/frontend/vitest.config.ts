import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    include: ['test/**/*.test.ts'],
    environment: 'node',
    // the optional live-backend flow expands real trees and needs minutes
    testTimeout: 180_000,
    hookTimeout: 60_000,
  },
});
