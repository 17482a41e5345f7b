"""Regenerate the bundled OTA example document (src/phm/data/ota.json).

The component inventory is the OTA mobile robot's module/submodule/component
list with verbatim quantities and per-hour failure rates.  Components with a
part-stress formula in the engine use their kind with the published rate as
the base and all factors defaulted (an exact identity product); everything
without a formula is a constant-rate custom part.  The DC motor is stored as
a constant here; a separate test fixture carries the additive motor
parameter set that reproduces the same rate through the motor calculator.

The configuration mirrors the document hierarchy as nested series groups
(all-series: the conservative reading of the robot's arrangement).
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from phm.model import (  # noqa: E402
    ComponentSpec, ConfigGroup, ConfigLeaf, Module, RobotModel, SubModule,
    parse_model, serialize_model,
)

# (module, submodule, component, kind, quantity, per-hour rate)
ROWS = [
    ("Power", "Battery", "Battery", "battery", 4, 2.00e-08),
    ("Power", "Battery Control Board", "Capacitor", "capacitor", 28, 9.36e-06),
    ("Power", "Battery Control Board", "Thermistor", "custom", 9, 7.33e-06),
    ("Power", "Battery Control Board", "Diode", "diode", 16, 6.25e-07),
    ("Power", "Battery Control Board", "LED", "custom", 9, 5.00e-06),
    ("Power", "Battery Control Board", "Resistor", "resistor", 26, 1.33e-07),
    ("Power", "Battery Control Board", "Trimpot", "custom", 3, 2.42e-06),
    ("Power", "Battery Control Board", "Step Down Switching Regulator", "custom", 7, 3.96e-07),
    ("Power", "Battery Control Board", "Terminal Blocks/Connector", "connector_general", 9, 2.21e-06),
    ("Power", "Battery Control Board", "Connector/Socket", "connector_socket", 1, 1.18e-07),
    ("Power", "Battery Control Board", "Inductor", "inductor", 7, 5.80e-08),
    ("Power", "Battery Control Board", "Current Sensor", "custom", 2, 2.50e-07),
    ("Power", "Battery Control Board", "Female Header", "custom", 1, 1.90e-06),
    ("Power", "Low Level Control Unit: DSK-MD", "XT60 Socket", "connector_socket", 4, 7.53e-08),
    ("Power", "Low Level Control Unit: DSK-MD", "Zener Diode", "diode", 4, 1.77e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "Ultrafast Diode", "diode", 4, 5.29e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "Aluminum Capacitor", "capacitor", 4, 1.40e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "Micro USB Connector", "connector_general", 1, 6.07e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "16MHz Cryst. Osc.", "quartz_crystal", 1, 1.77e-06),
    ("Power", "Low Level Control Unit: DSK-MD", "32.768Khz Cryst. Osc.", "quartz_crystal", 1, 4.26e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "Resistors", "resistor", 65, 4.99e-07),
    ("Power", "Low Level Control Unit: DSK-MD", "STM32F407VGT6", "custom", 1, 1.00e-08),
    ("Power", "Low Level Control Unit: DSK-MD", "Resettable Fuse", "fuse", 2, 2.30e-06),
    ("Sensing", "SICK Laser Sensor", "SICK Laser Sensor", "custom", 1, 8.00e-08),
    ("Sensing", "IPS", "Antenna", "custom", 1, 5.80e-07),
    ("Sensing", "IPS", "Micro USB Connector", "connector_general", 1, 6.07e-07),
    ("Sensing", "IPS", "DW1000 Chip", "custom", 1, 8.60e-08),
    ("Sensing", "IPS", "Resistor", "resistor", 5, 4.46e-07),
    ("Sensing", "IPS", "Capacitor", "capacitor", 5, 9.36e-07),
    ("Sensing", "Camera", "Camera", "custom", 1, 5.88e-09),
    ("Communication", "Communication Card: DSK-M", "Resistor", "resistor", 9, 4.53e-07),
    ("Communication", "Communication Card: DSK-M", "Capacitor", "capacitor", 9, 1.66e-07),
    ("Communication", "Communication Card: DSK-M", "25MHz Crystal Oscillator", "quartz_crystal", 1, 6.54e-06),
    ("Communication", "Communication Card: DSK-M", "16Mhz Crystal Oscillator", "quartz_crystal", 1, 5.90e-07),
    ("Communication", "Communication Card: DSK-M", "STM32F407VGT6", "custom", 1, 2.30e-07),
    ("Communication", "Communication Card: DSK-M", "SN65HVD230DR", "custom", 1, 1.70e-07),
    ("Communication", "Communication Card: DSK-M", "Fuse", "fuse", 4, 8.00e-08),
    ("Communication", "Communication Card: DSK-M", "LAN8720A-CP", "custom", 1, 5.90e-07),
    ("Communication", "Communication Card: DSK-M", "Micro USB Connector", "connector_general", 1, 2.43e-06),
    ("Communication", "Antenna", "Antenna", "custom", 1, 7.50e-07),
    ("Mobility", "Encoder", "Encoder", "custom", 2, 5.80e-06),
    ("Mobility", "Driver wheel", "Driver wheel", "custom", 2, 1.80e-07),
    ("Mobility", "Caster wheel", "Caster wheel", "custom", 4, 6.80e-06),
    ("Mobility", "DC Motor", "DC Motor", "custom", 2, 8.04e-06),
    ("Mobility", "Bearing", "Bearing", "bearing", 4, 3.61e-11),
    ("Computation", "YSK-M: High Level Control Unit", "Inno-Box Industrial Box PC", "custom", 1, 6.50e-08),
    ("Computation", "YSK-G: Vision Control Unit", "NVIDIA JETSON TX2", "custom", 1, 5.00e-08),
]


def params_for(kind: str, rate: float) -> dict:
    if kind == "battery":
        return {"battery_type": "primary_cell"}
    return {"base_rate": {"value": rate, "unit": "per_hour"}}


def build_model() -> RobotModel:
    module_order = []
    modules = {}
    for module, submodule, component, kind, qty, rate in ROWS:
        if module not in modules:
            modules[module] = {}
            module_order.append(module)
        subs = modules[module]
        if submodule not in subs:
            subs[submodule] = []
        subs[submodule].append(ComponentSpec(
            path=f"{module}/{submodule}/{component}",
            name=component,
            kind=kind,
            quantity=qty,
            params=params_for(kind, rate),
            environment="GM",
        ))

    module_objs = []
    config_modules = []
    for module in module_order:
        sub_objs = []
        sub_groups = []
        for submodule, comps in modules[module].items():
            sub_objs.append(SubModule(submodule, tuple(comps)))
            sub_groups.append(ConfigGroup(
                "series", tuple(ConfigLeaf(c.path) for c in comps)))
        module_objs.append(Module(module, tuple(sub_objs)))
        config_modules.append(ConfigGroup("series", tuple(sub_groups)))

    return RobotModel(
        name="OTA",
        modules=tuple(module_objs),
        configuration=ConfigGroup("series", tuple(config_modules)),
    )


def build_parallel_battery_variant() -> RobotModel:
    """Same inventory, but the four batteries are separate redundant units in
    a parallel group -- the alternative reading of the power arrangement,
    shipped as a second fixture for tests."""
    base = build_model()
    modules = []
    for module in base.modules:
        if module.name != "Power":
            modules.append(module)
            continue
        submodules = []
        for sub in module.submodules:
            if sub.name != "Battery":
                submodules.append(sub)
                continue
            cells = tuple(
                ComponentSpec(
                    path=f"Power/Battery/Battery {i}",
                    name=f"Battery {i}",
                    kind="battery",
                    quantity=1,
                    params={"battery_type": "primary_cell"},
                    environment="GM",
                )
                for i in range(1, 5)
            )
            submodules.append(SubModule("Battery", cells))
        modules.append(Module("Power", tuple(submodules)))

    def rewrite(node):
        if isinstance(node, ConfigLeaf):
            return node
        children = tuple(rewrite(c) for c in node.children)
        if any(isinstance(c, ConfigLeaf) and c.ref == "Power/Battery/Battery"
               for c in children):
            children = tuple(
                ConfigGroup("parallel", tuple(
                    ConfigLeaf(f"Power/Battery/Battery {i}") for i in range(1, 5)))
                if isinstance(c, ConfigLeaf) and c.ref == "Power/Battery/Battery" else c
                for c in children)
        return ConfigGroup(node.mode, children)

    return RobotModel(
        name="OTA (parallel battery variant)",
        modules=tuple(modules),
        configuration=rewrite(base.configuration),
    )


def write_canonical(model: RobotModel, out_path: str) -> None:
    text = serialize_model(model)
    reparsed = parse_model(text)
    assert serialize_model(reparsed) == text, "fixture is not canonical"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {len(reparsed.components())} components to {os.path.relpath(out_path)}")


def main():
    root = os.path.join(os.path.dirname(__file__), "..")
    write_canonical(build_model(),
                    os.path.join(root, "src", "phm", "data", "ota.json"))
    write_canonical(build_parallel_battery_variant(),
                    os.path.join(root, "tests", "fixtures", "ota_parallel_battery.json"))


if __name__ == "__main__":
    main()
