/** Boots a real gateway for the test run.
 *
 * Picks a free port, starts the HTTP service with a throwaway session
 * store, waits for /api/health, and provides the base URL to the tests.
 * The returned teardown stops the server and removes the store.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

declare module "vitest" {
  export interface ProvidedContext {
    gatewayUrl: string;
  }
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        probe.close();
        reject(new Error("could not allocate a port"));
        return;
      }
      const { port } = address;
      probe.close(() => resolve(port));
    });
  });
}

async function waitForHealth(base: string, child: ChildProcess, stderr: string[]): Promise<void> {
  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`gateway exited with code ${child.exitCode}:\n${stderr.join("")}`);
    }
    try {
      const response = await fetch(`${base}/api/health`);
      if (response.ok) {
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  child.kill("SIGKILL");
  throw new Error(`gateway did not become healthy in time:\n${stderr.join("")}`);
}

interface SetupContext {
  provide: (key: "gatewayUrl", value: string) => void;
}

export default async function setup({ provide }: SetupContext): Promise<() => Promise<void>> {
  const port = await freePort();
  const storeDir = mkdtempSync(join(tmpdir(), "leasecheck-ui-"));
  const stderr: string[] = [];
  const child = spawn(
    "python3",
    [
      "-m",
      "leasecheck.gateway.cli",
      "serve",
      "--host",
      "127.0.0.1",
      "--port",
      String(port),
      "--store-dir",
      storeDir,
    ],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  child.stderr?.on("data", (chunk: Buffer) => {
    stderr.push(chunk.toString());
  });

  const base = `http://127.0.0.1:${port}`;
  await waitForHealth(base, child, stderr);
  provide("gatewayUrl", base);

  return async () => {
    child.kill("SIGTERM");
    await new Promise<void>((resolve) => {
      const timer = setTimeout(() => {
        child.kill("SIGKILL");
        resolve();
      }, 3000);
      child.once("exit", () => {
        clearTimeout(timer);
        resolve();
      });
    });
    rmSync(storeDir, { recursive: true, force: true });
  };
}
