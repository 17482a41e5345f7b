import { describe, expect, it } from "vitest";

import {
  addComponent,
  addModule,
  addSubmodule,
  componentPaths,
  deleteComponent,
  describeConfig,
  toggleGroupMode,
  updateComponent,
} from "../src/model_ops.js";
import type { ModelDocument } from "../src/types.js";

function baseDoc(): ModelDocument {
  return {
    schema_version: 1,
    name: "bot",
    modules: [
      {
        name: "Power",
        submodules: [
          {
            name: "Battery",
            components: [
              {
                name: "Cell",
                kind: "battery",
                quantity: 4,
                params: { battery_type: "primary_cell" },
              },
            ],
          },
        ],
      },
    ],
    configuration: {
      type: "series",
      children: [{ type: "leaf", ref: "Power/Battery/Cell" }],
    },
  };
}

describe("model edit operations", () => {
  it("lists component paths in document order", () => {
    expect(componentPaths(baseDoc())).toEqual(["Power/Battery/Cell"]);
  });

  it("adds modules, submodules, and components without mutating the source", () => {
    const doc = baseDoc();
    const withModule = addModule(doc, "Sensing");
    expect(doc.modules.length).toBe(1);
    const withSub = addSubmodule(withModule, "Sensing", "Lidar");
    const withComp = addComponent(withSub, "Sensing", "Lidar", {
      name: "Scanner",
      kind: "custom",
      quantity: 1,
      params: { base_rate: { value: 1e-7, unit: "per_hour" } },
    });
    expect(componentPaths(withComp)).toEqual([
      "Power/Battery/Cell",
      "Sensing/Lidar/Scanner",
    ]);
    // the new component is wired into the configuration automatically
    expect(describeConfig(withComp.configuration)).toContain("Sensing/Lidar/Scanner");
  });

  it("deletes a component and its configuration leaf", () => {
    const doc = deleteComponent(baseDoc(), "Power/Battery/Cell");
    expect(componentPaths(doc)).toEqual([]);
    expect(doc.configuration).toBeUndefined();
  });

  it("updates component fields in place", () => {
    const doc = updateComponent(baseDoc(), "Power/Battery/Cell", { quantity: 2 });
    expect(doc.modules[0].submodules[0].components[0].quantity).toBe(2);
  });

  it("toggles a group between series and parallel and back", () => {
    const doc = baseDoc();
    const toggled = toggleGroupMode(doc, []);
    expect(toggled.configuration?.type).toBe("parallel");
    const restored = toggleGroupMode(toggled, []);
    expect(restored.configuration).toEqual(doc.configuration);
  });

  it("rejects toggling through a leaf", () => {
    expect(() => toggleGroupMode(baseDoc(), [0])).toThrow();
  });
});
