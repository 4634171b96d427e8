import type { TemplateField, TemplateManifest } from "./api.js";
import { escapeXml as esc } from "./canvas.js";

export interface DeviceEntry {
  id: string;
  category: string;
  label: string;
}

export type FieldValue = boolean | string | null | string[];

/** Devices owned by the user get ids d1, d2, … in row order, the same
 * convention the survey importer uses. */
export function numberDevices(
  rows: { category: string; label: string }[],
): DeviceEntry[] {
  return rows.map((row, index) => ({
    id: `d${index + 1}`,
    category: row.category,
    label: row.label || `Device ${index + 1}`,
  }));
}

function eligible(field: TemplateField, devices: DeviceEntry[]): DeviceEntry[] {
  if (!field.categories) return devices;
  return devices.filter((device) => field.categories!.includes(device.category));
}

/**
 * Fill the template's blank record with the wizard's answers. `values`
 * is keyed by field path ("google.prompts"); unanswered fields keep the
 * template default. Pure, so the record sent to /instantiate is fully
 * testable without a DOM.
 */
export function buildRecord(
  manifest: TemplateManifest,
  devices: DeviceEntry[],
  values: Map<string, FieldValue>,
): Record<string, unknown> {
  const record = JSON.parse(JSON.stringify(manifest.record)) as Record<
    string,
    unknown
  >;
  record.devices = devices.map((device) => ({
    id: device.id,
    category: device.category,
    label: device.label,
  }));
  for (const field of manifest.fields) {
    const value = values.get(field.path);
    if (value === undefined) continue;
    const [section, key] = field.path.split(".", 2) as [string, string];
    const target = record[section] as Record<string, unknown>;
    target[key] = value;
  }
  return record;
}

function fieldHtml(field: TemplateField, devices: DeviceEntry[]): string {
  const pathAttribute = `data-path="${esc(field.path)}"`;
  if (field.kind === "bool") {
    return (
      `<label class="wiz-field"><input type="checkbox" ${pathAttribute}/> ` +
      `${esc(field.label)}</label>`
    );
  }
  const options = eligible(field, devices);
  if (options.length === 0) {
    return (
      `<p class="wiz-field wiz-disabled">${esc(field.label)} ` +
      `(add a matching device first)</p>`
    );
  }
  if (field.kind === "device_id") {
    const items = options
      .map((d) => `<option value="${esc(d.id)}">${esc(d.label)}</option>`)
      .join("");
    return (
      `<label class="wiz-field">${esc(field.label)} ` +
      `<select ${pathAttribute}><option value="">none</option>${items}</select></label>`
    );
  }
  const boxes = options
    .map(
      (d) =>
        `<label><input type="checkbox" ${pathAttribute} ` +
        `data-device="${esc(d.id)}"/> ${esc(d.label)}</label>`,
    )
    .join("");
  return (
    `<fieldset class="wiz-field"><legend>${esc(field.label)}</legend>` +
    `${boxes}</fieldset>`
  );
}

/** Device inventory first, then the provider's method toggles. */
export function wizardHtml(
  manifest: TemplateManifest,
  devices: DeviceEntry[],
): string {
  const categoryOptions = (selected: string) =>
    manifest.device_categories
      .map(
        (c) =>
          `<option value="${esc(c)}"${c === selected ? " selected" : ""}>` +
          `${esc(c.replace(/_/g, " "))}</option>`,
      )
      .join("");
  const deviceRows = devices
    .map(
      (device, index) =>
        `<div class="wiz-device" data-index="${index}">` +
        `<select class="device-category">${categoryOptions(device.category)}</select>` +
        `<input class="device-label" value="${esc(device.label)}" placeholder="label"/>` +
        `<button type="button" class="device-remove" data-index="${index}">×</button>` +
        `</div>`,
    )
    .join("");
  return [
    "<h4>1. Your devices</h4>",
    `<div id="wiz-devices">${deviceRows}</div>`,
    '<button type="button" id="device-add">add device</button>',
    `<h4>2. Ways into the ${esc(manifest.provider)} account</h4>`,
    `<div id="wiz-fields">${manifest.fields
      .map((field) => fieldHtml(field, devices))
      .join("")}</div>`,
    '<button type="button" id="wiz-apply">Create graph</button>',
    '<p id="wiz-error" class="field-error"></p>',
  ].join("");
}

/** Collect answers from the rendered wizard, inverse of wizardHtml. */
export function readWizardValues(
  root: ParentNode,
  manifest: TemplateManifest,
): Map<string, FieldValue> {
  const values = new Map<string, FieldValue>();
  for (const field of manifest.fields) {
    const selector = `[data-path="${field.path}"]`;
    if (field.kind === "bool") {
      const box = root.querySelector<HTMLInputElement>(selector);
      if (box) values.set(field.path, box.checked);
    } else if (field.kind === "device_id") {
      const select = root.querySelector<HTMLSelectElement>(selector);
      if (select) values.set(field.path, select.value === "" ? null : select.value);
    } else {
      const boxes = root.querySelectorAll<HTMLInputElement>(selector);
      if (boxes.length > 0) {
        values.set(
          field.path,
          [...boxes]
            .filter((box) => box.checked)
            .map((box) => box.dataset.device ?? ""),
        );
      }
    }
  }
  return values;
}
