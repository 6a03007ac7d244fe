/** Boots the Python API server once for the integration suite. */
import { spawn, type ChildProcess } from 'node:child_process';

export const SERVER_PORT = 8807;
export const SERVER_URL = `http://127.0.0.1:${SERVER_PORT}`;

let server: ChildProcess | undefined;

async function waitForReady(url: string, timeoutMs = 20_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${url}/v1/houses`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error(`server at ${url} did not come up`);
}

export default async function setup(): Promise<() => void> {
  server = spawn(
    'python3',
    ['-m', 'voxelsmith.cli', 'serve', '--port', String(SERVER_PORT)],
    { cwd: '..', stdio: 'ignore' },
  );
  await waitForReady(SERVER_URL);
  return () => {
    server?.kill('SIGTERM');
  };
}
