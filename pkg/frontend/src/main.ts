import {
  AccessGraphClient,
  ServiceError,
  ServiceUnreachable,
  type TemplateManifest,
} from "./api.js";
import { renderCanvas } from "./canvas.js";
import { scorePanelHtml, whatIfPanelHtml, type MethodEntry } from "./panels.js";
import { ClientState } from "./state.js";
import {
  buildRecord,
  numberDevices,
  readWizardValues,
  wizardHtml,
  type DeviceEntry,
} from "./wizard.js";

const params = new URLSearchParams(window.location.search);
const client = new AccessGraphClient(
  params.get("service") ?? "http://127.0.0.1:8000",
);
const state = new ClientState();

let manifest: TemplateManifest | null = null;
let devices: DeviceEntry[] = [];

const el = (id: string) => {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found;
};

function banner(message: string | null): void {
  const box = el("banner");
  box.textContent = message ?? "";
  box.className = message ? "banner visible" : "banner";
}

function nodeLabels(): Map<string, string> {
  const labels = new Map<string, string>();
  for (const node of state.document?.nodes ?? []) {
    labels.set(node.id, node.label ?? node.id);
  }
  return labels;
}

function methodEntries(): MethodEntry[] {
  return (state.document?.nodes ?? [])
    .filter((node) => node.kind === "access_method")
    .map((node) => ({ id: node.id, label: node.label ?? node.id }));
}

function render(): void {
  el("canvas").innerHTML = renderCanvas(state.document, {
    lost: state.lost,
    whatIf: state.whatIf,
  });
  el("score-panel").innerHTML = scorePanelHtml(
    state.report,
    nodeLabels(),
    state.dirty,
  );
  el("whatif-panel").innerHTML = whatIfPanelHtml(
    methodEntries(),
    state.lost,
    state.whatIf,
  );
}

function renderWizard(): void {
  el("wizard").innerHTML = manifest
    ? wizardHtml(manifest, devices)
    : "<p>loading template…</p>";
}

function showWizardError(error: unknown): void {
  const message =
    error instanceof ServiceError
      ? error.path
        ? `${error.message}`
        : error.message
      : String(error);
  el("wiz-error").textContent = message;
  if (error instanceof ServiceError && error.path) {
    // Light the offending field up where the user is looking.
    const field = document.querySelector(`[data-path="${error.path}"]`);
    field?.closest(".wiz-field")?.classList.add("invalid");
  }
}

async function loadTemplate(provider: string): Promise<void> {
  try {
    manifest = await client.template(provider);
    banner(null);
  } catch (error) {
    manifest = null;
    banner(
      error instanceof ServiceUnreachable
        ? error.message
        : `template failed: ${String(error)}`,
    );
  }
  renderWizard();
}

async function applyWizard(): Promise<void> {
  if (!manifest) return;
  const values = readWizardValues(el("wizard"), manifest);
  try {
    const record = buildRecord(manifest, devices, values);
    const graphDocument = await client.instantiate(record);
    const stored = state.sessionId
      ? await client.replaceGraph(state.sessionId, graphDocument, state.revision)
      : await client.createGraph(graphDocument);
    const fetched = await client.getGraph(stored.id);
    state.loadDocument(fetched.id, fetched.revision, fetched.document);
    render();
    const analysis = await client.analyze(fetched.id);
    const first = analysis.accounts[0];
    if (first) state.setReport(first, analysis.revision);
    banner(null);
    render();
  } catch (error) {
    if (error instanceof ServiceUnreachable) banner(error.message);
    else showWizardError(error);
  }
}

async function onToggleMethod(id: string): Promise<void> {
  state.toggleLost(id);
  if (state.lost.size === 0 || !state.sessionId) {
    render();
    return;
  }
  try {
    state.setWhatIf(
      await client.whatIf(state.sessionId, [...state.lost], state.report?.account),
    );
    banner(null);
  } catch (error) {
    banner(
      error instanceof ServiceUnreachable
        ? error.message
        : `what-if failed: ${String(error)}`,
    );
  }
  render();
}

function wire(): void {
  el("provider").addEventListener("change", (event) => {
    void loadTemplate((event.target as HTMLSelectElement).value);
  });

  el("wizard").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "device-add") {
      devices = numberDevices([
        ...devices,
        { category: manifest?.device_categories[0] ?? "phone", label: "" },
      ]);
      renderWizard();
    } else if (target.classList.contains("device-remove")) {
      const index = Number(target.dataset.index);
      devices = numberDevices(devices.filter((_, i) => i !== index));
      renderWizard();
    } else if (target.id === "wiz-apply") {
      syncDeviceRows();
      void applyWizard();
    }
  });

  el("wizard").addEventListener("change", (event) => {
    const target = event.target as HTMLElement;
    if (
      target.classList.contains("device-category") ||
      target.classList.contains("device-label")
    ) {
      syncDeviceRows();
      renderWizard(); // eligibility of method toggles may have changed
    }
  });

  el("whatif-panel").addEventListener("change", (event) => {
    const box = event.target as HTMLInputElement;
    const id = box.dataset.method;
    if (id) void onToggleMethod(id);
  });

  el("whatif-panel").addEventListener("click", (event) => {
    if ((event.target as HTMLElement).id === "clear-lost") {
      state.clearSelection();
      render(); // the pre-toggle report is still in place
    }
  });
}

function syncDeviceRows(): void {
  const rows = [...document.querySelectorAll<HTMLElement>(".wiz-device")].map(
    (row) => ({
      category:
        row.querySelector<HTMLSelectElement>(".device-category")?.value ?? "phone",
      label: row.querySelector<HTMLInputElement>(".device-label")?.value ?? "",
    }),
  );
  devices = numberDevices(rows);
}

async function boot(): Promise<void> {
  wire();
  render();
  try {
    await client.healthz();
  } catch {
    banner(`service unreachable at ${client.baseUrl}; start it with: accessgraph serve`);
    renderWizard();
    return;
  }
  await loadTemplate((el("provider") as HTMLSelectElement).value);
}

void boot();
