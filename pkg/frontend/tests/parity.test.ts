/**
 * Live-node parity: the manufacturer/seller/consumer flows driven through the
 * console's own flow layer must land on the same final state root as the CLI's
 * scripted scenario, and the consumer view must render Genuine for the shipped
 * product's QR payload. Each run boots a real node process from this repo.
 */

import { spawn, spawnSync } from "node:child_process";
import type { ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import net from "node:net";
import { tmpdir } from "node:os";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, NodeApi } from "../src/api";
import { ManufacturerFlow, SellerFlow, Session, verifyPayload } from "../src/flows";
import { SessionKey } from "../src/keys";
import { runConsoleScenario, SCENARIO, scenarioKeys } from "../src/scenario";
import { errorInline, verdictPanel } from "../src/views";
import type { ScenarioResult } from "../src/scenario";

const SEED = "2a".repeat(32);

interface LiveNode {
  url: string;
  proc: ChildProcess;
  dir: string;
  stderr: string[];
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = net.createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      server.close(() => resolve(address.port));
    });
    server.on("error", reject);
  });
}

async function startNode(): Promise<LiveNode> {
  const port = await freePort();
  const dir = mkdtempSync(path.join(tmpdir(), "pchain-console-"));
  const configPath = path.join(dir, "node.conf");
  writeFileSync(
    configPath,
    [
      "listen_host = 127.0.0.1",
      `listen_port = ${port}`,
      `block_log_path = ${path.join(dir, "node.blocklog")}`,
      "block_interval_seconds = 0",
      "faucet_enabled = true",
      "",
    ].join("\n"),
  );
  const proc = spawn("pchain-node", ["--config", configPath], { stdio: ["ignore", "ignore", "pipe"] });
  const stderr: string[] = [];
  proc.stderr?.on("data", (chunk: Buffer) => stderr.push(chunk.toString()));
  const node: LiveNode = { url: `http://127.0.0.1:${port}`, proc, dir, stderr };

  const deadline = Date.now() + 30_000;
  for (;;) {
    if (proc.exitCode !== null) {
      throw new Error(`pchain-node exited with ${proc.exitCode}: ${stderr.join("")}`);
    }
    try {
      const response = await fetch(`${node.url}/v1/chain/head`);
      if (response.ok) return node;
    } catch {
      // not listening yet
    }
    if (Date.now() > deadline) throw new Error(`node did not come up: ${stderr.join("")}`);
    await new Promise((r) => setTimeout(r, 100));
  }
}

function stopNode(node: LiveNode): void {
  node.proc.kill("SIGTERM");
  rmSync(node.dir, { recursive: true, force: true });
}

describe("console parity with the CLI scenario", () => {
  let cliNode: LiveNode;
  let consoleNode: LiveNode;
  let cliResult: { state_root: string; verdict: { verdict: string }; qr_payload: string };
  let consoleResult: ScenarioResult;

  beforeAll(async () => {
    [cliNode, consoleNode] = await Promise.all([startNode(), startNode()]);

    const run = spawnSync("pchain", ["--node", cliNode.url, "--json", "scenario", "run", "--seed", SEED], {
      encoding: "utf8",
      timeout: 60_000,
    });
    if (run.status !== 0) throw new Error(`CLI scenario failed: ${run.stdout}\n${run.stderr}`);
    cliResult = JSON.parse(run.stdout);

    consoleResult = await runConsoleScenario(new NodeApi(consoleNode.url), SEED);
  });

  afterAll(() => {
    for (const node of [cliNode, consoleNode]) if (node) stopNode(node);
  });

  it("reaches the same final state root on a fresh node", async () => {
    expect(consoleResult.stateRoot).toBe(cliResult.state_root);
    // The CLI's reported root is the head of its own node, not a fabrication.
    const cliHead = (await new NodeApi(cliNode.url).head()).state_root;
    expect(cliResult.state_root).toBe(cliHead);
  });

  it("both chains replay cleanly end to end", async () => {
    for (const node of [cliNode, consoleNode]) {
      const validation = await new NodeApi(node.url).validateChain();
      expect(validation).toEqual({ ok: true, height: null, reason: null });
    }
  });

  it("the consumer view renders Genuine for the shipped product's QR", () => {
    expect(consoleResult.verdict.verdict).toBe("Genuine");
    const html = verdictPanel({ kind: "verdict", result: consoleResult.verdict });
    expect(html).toContain('class="panel verdict genuine"');
    expect(html).toContain("<h3>Genuine</h3>");
  });

  it("the same payload text verifies Genuine on the CLI's node too", async () => {
    const outcome = await verifyPayload(new NodeApi(cliNode.url), cliResult.qr_payload);
    expect(outcome.kind).toBe("verdict");
    if (outcome.kind === "verdict") expect(outcome.result.verdict).toBe("Genuine");
  });

  it("before shipping, the console saw Unknown/NotYetShipped", () => {
    expect(consoleResult.preShip.kind).toBe("verdict");
    if (consoleResult.preShip.kind === "verdict") {
      expect(consoleResult.preShip.result.verdict).toBe("Unknown");
      expect(consoleResult.preShip.result.reason).toBe("NotYetShipped");
    }
  });

  it("an enroll attempt with a non-manufacturer key renders inline Unauthorized", async () => {
    const api = new NodeApi(consoleNode.url);
    const { seller } = scenarioKeys(SEED);
    const intruder = new ManufacturerFlow(new Session(api, seller, { produceAfterSubmit: true }));
    let rendered = "";
    try {
      await intruder.enrollProduct(consoleResult.companyAddr, "Knockoff", 1n, 1);
      throw new Error("enroll unexpectedly succeeded");
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      rendered = errorInline(err.code, err.message);
    }
    expect(rendered).toContain("Unauthorized");
    expect(rendered).toContain("inline-error");
  });

  it("an underfunded buy renders inline ValueTooLow", async () => {
    const api = new NodeApi(consoleNode.url);
    const { manufacturer, seller } = scenarioKeys(SEED);
    const maker = new ManufacturerFlow(new Session(api, manufacturer, { produceAfterSubmit: true }));
    const { productId } = await maker.enrollProduct(
      consoleResult.companyAddr,
      "Quantum Earbuds",
      SCENARIO.priceWei,
      3,
    );
    const shop = new SellerFlow(new Session(api, seller, { produceAfterSubmit: true }));
    let rendered = "";
    try {
      await shop.buy(consoleResult.companyAddr, productId, SCENARIO.sellerName, 2, SCENARIO.priceWei);
      throw new Error("buy unexpectedly succeeded");
    } catch (err) {
      if (!(err instanceof ApiError)) throw err;
      rendered = errorInline(err.code, err.message);
    }
    expect(rendered).toContain("ValueTooLow");
  });

  it("a register at exactly the company minimum succeeds", async () => {
    const api = new NodeApi(consoleNode.url);
    const key = SessionKey.generate();
    const session = new Session(api, key, { produceAfterSubmit: true });
    await session.requestFaucet(10n ** 18n);
    const company = await api.company(consoleResult.companyAddr);
    const receipt = await new SellerFlow(session).register(consoleResult.companyAddr, BigInt(company.min_fee_wei));
    expect(receipt.success).toBe(true);
  });
});
