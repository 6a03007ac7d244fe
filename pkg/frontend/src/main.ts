/** Browser entry point: wires the chat console, viewer, hint/prompt modes,
 * definition composer, and the metrics dashboard to the server API. */
import { ApiClient } from './api.js';
import { composeDefinition } from './composer.js';
import { drawSeries, expressivenessSeries, naturalizationSeries } from './metricsPanel.js';
import { Transcript } from './transcript.js';
import type { Classification, CursorRay, UtteranceReply } from './types.js';
import { ViewState } from './viewState.js';
import { Viewer } from './viewer.js';
import { WorldStore } from './worldStore.js';

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

async function boot(): Promise<void> {
  const api = new ApiClient(location.origin.replace(/:\d+$/, ':8765'));
  const store = new WorldStore();
  const transcript = new Transcript();
  const viewState = new ViewState();
  const viewer = new Viewer($('viewer') as HTMLCanvasElement, store);

  const houses = await api.listHouses();
  const houseId = houses.houses[0]?.house_id ?? 'box_house';
  const session = await api.createSession(houseId, 2);
  $('session-label').textContent = `${session.house_id} (${session.dims.join('x')})`;

  const world = await api.world(session.session_id, -1);
  store.applyAll(world.diffs);
  viewer.refresh();
  viewer.start();

  api.stream(session.session_id, store.lastSeq, (diff) => {
    if (store.applyDiff(diff)) viewer.refresh();
  }, (url) => new WebSocket(url));

  const transcriptEl = $('transcript');
  const modeEl = $('mode');
  const renderTranscript = () => {
    transcriptEl.innerHTML = '';
    for (const entry of transcript.all()) {
      const row = document.createElement('div');
      row.className = 'turn';
      const badge = entry.classification ?? (entry.needsHint ? 'hint?' : '...');
      row.innerHTML =
        `<div class="user">${entry.user}</div>` +
        `<div class="agent"><span class="badge ${transcript.badgeFor(entry)}">${badge}</span>` +
        `${entry.agent}</div>`;
      transcriptEl.appendChild(row);
    }
    transcriptEl.scrollTop = transcriptEl.scrollHeight;
    modeEl.textContent = viewState.mode;
    ($('prompt-edit') as HTMLButtonElement).disabled = !viewState.hintActive;
  };

  const applyReply = (user: string, reply: UtteranceReply, viaHint: boolean) => {
    if (reply.error) {
      if (!viaHint) {
        transcript.append({
          seq: reply.seq, user, agent: reply.agent_text ?? reply.error,
          classification: null, needsHint: true,
        });
      }
      renderTranscript();
      return;
    }
    if (viaHint) {
      if (reply.needs_hint) {
        // cursor missed: stay in hint mode with a visual cue
        modeEl.classList.add('flash');
        setTimeout(() => modeEl.classList.remove('flash'), 400);
      } else {
        transcript.resolvePending(reply.seq, reply.agent_text ?? '',
                                  reply.classification as Classification);
      }
    } else {
      transcript.append({
        seq: reply.seq,
        user,
        agent: reply.agent_text ?? '',
        classification: reply.needs_hint ? null : (reply.classification as Classification),
        needsHint: Boolean(reply.needs_hint),
      });
    }
    viewState.syncPending(Boolean(reply.needs_hint));
    if (!reply.needs_hint) viewer.clearPromptBlocks();
    renderTranscript();
    void refreshMetrics();
  };

  const input = $('utterance') as HTMLInputElement;
  $('send').addEventListener('click', async () => {
    const text = input.value.trim();
    if (!text) return;
    input.value = '';
    try {
      const reply = await api.sendUtterance(session.session_id, text);
      applyReply(text, reply, false);
    } catch (err) {
      // transport failure: no transcript mutation, offer retry
      input.value = text;
      $('status').textContent = `send failed (${String(err)}); press send to retry`;
    }
  });
  input.addEventListener('keydown', (ev) => {
    if (ev.key === 'Enter') $('send').click();
  });

  $('viewer').addEventListener('mousemove', (ev) => {
    viewer.setHover(viewer.hitAt(ev.clientX, ev.clientY));
  });

  $('viewer').addEventListener('click', async (ev) => {
    const hit = viewer.hitAt(ev.clientX, ev.clientY);
    if (viewState.mode === 'prompt-edit') {
      if (hit?.prev) {
        const added = viewState.addPromptCell(...hit.prev);
        if (added && hit.prev) viewer.showPromptBlock(...hit.prev);
      }
      return;
    }
    if (viewState.mode === 'hint') {
      if (!hit) {
        modeEl.classList.add('flash');
        setTimeout(() => modeEl.classList.remove('flash'), 400);
        return;
      }
      const ray = viewer.rayAt(ev.clientX, ev.clientY);
      const cursor: CursorRay = { origin: ray.origin, direction: ray.direction };
      const reply = await api.sendHint(session.session_id, cursor, [...viewState.prompt]);
      applyReply('(hint)', reply, true);
    }
  });

  $('prompt-edit').addEventListener('click', () => {
    if (viewState.mode === 'prompt-edit') viewState.leavePromptEdit();
    else viewState.enterPromptEdit();
    renderTranscript();
  });

  $('compose').addEventListener('click', async () => {
    const head = ($('def-head') as HTMLInputElement).value;
    const body = ($('def-body') as HTMLTextAreaElement).value
      .split('\n').filter((l) => l.trim().length > 0);
    const result = composeDefinition(head, body);
    if (!result.ok || !result.utterance) {
      $('status').textContent = result.error ?? 'invalid definition';
      return;
    }
    const reply = await api.sendUtterance(session.session_id, result.utterance);
    applyReply(result.utterance, reply, false);
  });

  const natCanvas = $('naturalization') as HTMLCanvasElement;
  const exprCanvas = $('expressiveness') as HTMLCanvasElement;
  const refreshMetrics = async () => {
    const metrics = await api.metrics('1,2,3');
    drawSeries(natCanvas.getContext('2d')!, naturalizationSeries(metrics),
               natCanvas.width, natCanvas.height, 1);
    drawSeries(exprCanvas.getContext('2d')!, expressivenessSeries(metrics),
               exprCanvas.width, exprCanvas.height);
  };
  await refreshMetrics();
  renderTranscript();
}

boot().catch((err) => {
  document.body.innerHTML = `<pre>failed to start: ${String(err)}</pre>`;
});
