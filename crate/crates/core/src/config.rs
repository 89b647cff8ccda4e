//! Plain-text configuration: loading, validation, canonical serialization.
//!
//! The format is a two-level key–value file:
//!
//! ```text
//! # finger used in the bench experiments
//! [membrane]
//! sigma0 = 150 kPa
//! t = 1.2 mm
//!
//! [sweep]
//! n_grid = 3, 3.5, 4
//! p_grid = 0, 25, 50, 75, 100, 125 kPa
//! ```
//!
//! Lines are `[section]` headers, `key = value(, value)* (unit)?` pairs, or
//! full-line `#` comments; whitespace around `=` and commas is ignored and
//! both `\n` and `\r\n` line endings are accepted. A trailing unit token
//! (`kPa`, `mm`, `g`, `N`) converts every value on the line into base SI
//! units; each key admits only the unit of its own quantity. Unknown
//! sections or keys and duplicated keys are errors — typos must not pass
//! silently. Missing keys fall back to the documented defaults (membrane:
//! the reference finger; plant and grasp: their `Default` impls); a `[sweep]`
//! section, if present at all, must carry both grids.

use crate::error::{Error, Result};
use crate::grasp::{DEFAULT_BULGES, DEFAULT_CONTACTS, GraspProblem, STANDARD_GRAVITY};
use crate::harness::plant::PlantConfig;
use crate::membrane::MembraneSpec;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

/// Payload and gripper defaults carried by the `[grasp]` config section.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspDefaults {
    /// Default payload mass, kg, if the file provides one.
    pub mass: Option<f64>,
    pub gravity: f64,
    pub contacts: u32,
    pub safety_factor: f64,
    pub bulges: u32,
}

impl Default for GraspDefaults {
    fn default() -> Self {
        GraspDefaults {
            mass: None,
            gravity: STANDARD_GRAVITY,
            contacts: DEFAULT_CONTACTS,
            safety_factor: 1.0,
            bulges: DEFAULT_BULGES,
        }
    }
}

impl GraspDefaults {
    /// Build a grasp problem for the given payload using these defaults.
    pub fn problem(&self, mass: f64) -> GraspProblem {
        GraspProblem {
            mass,
            gravity: self.gravity,
            contacts: self.contacts,
            bulges: self.bulges,
            safety_factor: self.safety_factor,
        }
    }
}

/// A `[sweep]` section: the (force, pressure) grid to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepDef {
    /// Payload mass override for the sweep, kg.
    pub mass: Option<f64>,
    /// Per-contact normal forces, N, strictly ascending.
    pub n_grid: Vec<f64>,
    /// Pocket pressures, Pa, strictly ascending.
    pub p_grid: Vec<f64>,
}

/// Everything a config file can define, fully validated.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub membrane: MembraneSpec,
    pub plant: PlantConfig,
    pub grasp: GraspDefaults,
    pub sweep: Option<SweepDef>,
}

impl Default for LoadedConfig {
    fn default() -> Self {
        LoadedConfig {
            membrane: MembraneSpec::reference(),
            plant: PlantConfig::default(),
            grasp: GraspDefaults::default(),
            sweep: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Membrane,
    Plant,
    Sweep,
    Grasp,
}

impl Section {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "membrane" => Some(Section::Membrane),
            "plant" => Some(Section::Plant),
            "sweep" => Some(Section::Sweep),
            "grasp" => Some(Section::Grasp),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Section::Membrane => "membrane",
            Section::Plant => "plant",
            Section::Sweep => "sweep",
            Section::Grasp => "grasp",
        }
    }
}

/// Unit family a key's values belong to; `Bare` keys admit no suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum UnitClass {
    Pressure,
    Length,
    Mass,
    Force,
    Bare,
}

fn unit_factor(unit: &str, class: UnitClass) -> Option<f64> {
    match (unit, class) {
        ("kPa", UnitClass::Pressure) => Some(1.0e3),
        ("mm", UnitClass::Length) => Some(1.0e-3),
        ("g", UnitClass::Mass) => Some(1.0e-3),
        ("N", UnitClass::Force) => Some(1.0),
        _ => None,
    }
}

fn is_unit_token(token: &str) -> bool {
    matches!(token, "kPa" | "mm" | "g" | "N")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KeyKind {
    Float(UnitClass),
    FloatList(UnitClass),
    UInt32,
    UInt64,
}

fn key_kind(section: Section, key: &str) -> Option<KeyKind> {
    use KeyKind::*;
    use UnitClass::*;
    match section {
        Section::Membrane => match key {
            "sigma0" | "E" | "E0" | "tau_s" => Some(Float(Pressure)),
            "t" | "a" | "h_max" | "g" => Some(Float(Length)),
            "nu" | "eta" | "mu_rim" => Some(Float(Bare)),
            _ => None,
        },
        Section::Plant => match key {
            "loadcell_sigma" => Some(Float(Force)),
            "volts_to_pascals" | "pressure_tau" | "mu_sigma" | "timestep" | "close_rate"
            | "hold_time" | "lift_time" | "transport_time" | "transport_factor" => {
                Some(Float(Bare))
            }
            "seed" => Some(UInt64),
            _ => None,
        },
        Section::Sweep => match key {
            "mass" => Some(Float(Mass)),
            "n_grid" => Some(FloatList(Force)),
            "p_grid" => Some(FloatList(Pressure)),
            _ => None,
        },
        Section::Grasp => match key {
            "mass" => Some(Float(Mass)),
            "gravity" | "safety_factor" => Some(Float(Bare)),
            "contacts" | "bulges" => Some(UInt32),
            _ => None,
        },
    }
}

/// Config-file names for the membrane struct fields, for error mapping.
fn membrane_key_for_field(field: &str) -> &str {
    match field {
        "residual_stress" => "sigma0",
        "thickness" => "t",
        "half_span" => "a",
        "youngs_modulus" => "E",
        "poisson_ratio" => "nu",
        "max_height" => "h_max",
        "rim_gap" => "g",
        "contact_modulus" => "E0",
        "stiffening" => "eta",
        "shear_strength" => "tau_s",
        "rim_friction" => "mu_rim",
        _ => field,
    }
}

#[derive(Debug, Clone)]
enum Value {
    Floats(Vec<f64>),
    U32(u32),
    U64(u64),
}

struct Entry {
    line: usize,
    value: Value,
}

type Entries = HashMap<(Section, &'static str), Entry>;

/// Canonical key lists, in serialization order.
const MEMBRANE_KEYS: [&str; 11] = [
    "sigma0", "t", "a", "E", "nu", "h_max", "g", "E0", "eta", "tau_s", "mu_rim",
];
const PLANT_KEYS: [&str; 11] = [
    "volts_to_pascals",
    "pressure_tau",
    "loadcell_sigma",
    "mu_sigma",
    "timestep",
    "seed",
    "close_rate",
    "hold_time",
    "lift_time",
    "transport_time",
    "transport_factor",
];
const GRASP_KEYS: [&str; 5] = ["mass", "gravity", "contacts", "safety_factor", "bulges"];
const SWEEP_KEYS: [&str; 3] = ["mass", "n_grid", "p_grid"];

fn canonical_key(section: Section, key: &str) -> Option<&'static str> {
    let list: &[&'static str] = match section {
        Section::Membrane => &MEMBRANE_KEYS,
        Section::Plant => &PLANT_KEYS,
        Section::Grasp => &GRASP_KEYS,
        Section::Sweep => &SWEEP_KEYS,
    };
    list.iter().find(|k| **k == key).copied()
}

fn parse_float_token(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a number, got '{token}'"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("expected a finite number, got '{token}'"),
        });
    }
    Ok(v)
}

fn parse_value(kind: KeyKind, key: &str, rhs: &str, line: usize) -> Result<Value> {
    match kind {
        KeyKind::UInt32 => {
            let v: u32 = rhs.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("key '{key}' takes a non-negative integer, got '{rhs}'"),
            })?;
            Ok(Value::U32(v))
        }
        KeyKind::UInt64 => {
            let v: u64 = rhs.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("key '{key}' takes a non-negative integer, got '{rhs}'"),
            })?;
            Ok(Value::U64(v))
        }
        KeyKind::Float(class) | KeyKind::FloatList(class) => {
            let mut segments: Vec<&str> = rhs.split(',').map(str::trim).collect();
            // A unit token, if any, trails the last value.
            let mut factor = 1.0;
            let last = segments.last().copied().unwrap_or_default();
            let mut tail = last.split_ascii_whitespace();
            let (first_tok, unit_tok, extra) = (tail.next(), tail.next(), tail.next());
            match (first_tok, unit_tok, extra) {
                (Some(_), None, _) => {}
                (Some(num), Some(unit), None) if is_unit_token(unit) => {
                    factor = unit_factor(unit, class).ok_or_else(|| Error::Parse {
                        line,
                        message: format!("unit '{unit}' does not apply to key '{key}'"),
                    })?;
                    let n = segments.len();
                    segments[n - 1] = num;
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        message: format!("malformed value '{last}' for key '{key}'"),
                    });
                }
            }
            let mut values = Vec::with_capacity(segments.len());
            for seg in &segments {
                if seg.is_empty() {
                    return Err(Error::Parse {
                        line,
                        message: format!("empty value in list for key '{key}'"),
                    });
                }
                values.push(parse_float_token(seg, line)? * factor);
            }
            if matches!(kind, KeyKind::Float(_)) && values.len() != 1 {
                return Err(Error::Parse {
                    line,
                    message: format!("key '{key}' takes a single value, got {}", values.len()),
                });
            }
            Ok(Value::Floats(values))
        }
    }
}

/// Parse config text into validated domain objects.
pub fn parse_config(text: &str) -> Result<LoadedConfig> {
    let mut entries: Entries = HashMap::new();
    let mut seen_sections: Vec<Section> = Vec::new();
    let mut current: Option<Section> = None;

    for (idx, raw_line) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line).trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("malformed section header '{line}'"),
            })?;
            let section = Section::from_name(name.trim()).ok_or_else(|| Error::UnknownSection {
                line: line_no,
                section: name.trim().to_string(),
            })?;
            if !seen_sections.contains(&section) {
                seen_sections.push(section);
            }
            current = Some(section);
            continue;
        }
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = lhs.trim();
        let section = current.ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("key '{key}' appears before any [section] header"),
        })?;
        let kind = key_kind(section, key).ok_or_else(|| Error::UnknownKey {
            line: line_no,
            section: section.name().to_string(),
            key: key.to_string(),
        })?;
        let canonical = canonical_key(section, key).expect("known key is canonical");
        if entries.contains_key(&(section, canonical)) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key '{key}' in section [{}]", section.name()),
            });
        }
        let value = parse_value(kind, key, rhs.trim(), line_no)?;
        entries.insert((section, canonical), Entry { line: line_no, value });
    }

    build_config(entries, &seen_sections)
}

fn take_float(entries: &Entries, section: Section, key: &'static str) -> Option<(f64, usize)> {
    entries.get(&(section, key)).map(|e| match &e.value {
        Value::Floats(v) => (v[0], e.line),
        _ => unreachable!("kind catalog guarantees float storage"),
    })
}

fn take_list(entries: &Entries, section: Section, key: &'static str) -> Option<(Vec<f64>, usize)> {
    entries.get(&(section, key)).map(|e| match &e.value {
        Value::Floats(v) => (v.clone(), e.line),
        _ => unreachable!("kind catalog guarantees float storage"),
    })
}

fn validation(field: &str, line: Option<usize>, message: String) -> Error {
    let message = match line {
        Some(n) => format!("line {n}: {message}"),
        None => message,
    };
    Error::Validation {
        field: field.to_string(),
        message,
    }
}

fn build_config(entries: Entries, seen_sections: &[Section]) -> Result<LoadedConfig> {
    // Membrane: reference finger with per-key overrides.
    let mut membrane = MembraneSpec::reference();
    {
        use Section::Membrane as S;
        let fields: [(&'static str, &mut f64); 11] = [
            ("sigma0", &mut membrane.residual_stress),
            ("t", &mut membrane.thickness),
            ("a", &mut membrane.half_span),
            ("E", &mut membrane.youngs_modulus),
            ("nu", &mut membrane.poisson_ratio),
            ("h_max", &mut membrane.max_height),
            ("g", &mut membrane.rim_gap),
            ("E0", &mut membrane.contact_modulus),
            ("eta", &mut membrane.stiffening),
            ("tau_s", &mut membrane.shear_strength),
            ("mu_rim", &mut membrane.rim_friction),
        ];
        for (key, slot) in fields {
            if let Some((v, _)) = take_float(&entries, S, key) {
                *slot = v;
            }
        }
        membrane = membrane.validated().map_err(|err| match err {
            Error::Spec { field, message } => {
                let key = membrane_key_for_field(field);
                let line = entries.get(&(S, canonical_key(S, key).unwrap_or("sigma0")))
                    .map(|e| e.line);
                validation(key, line, message)
            }
            other => other,
        })?;
    }

    // Plant: defaults with overrides.
    let mut plant = PlantConfig::default();
    {
        use Section::Plant as S;
        let fields: [(&'static str, &mut f64); 10] = [
            ("volts_to_pascals", &mut plant.volts_to_pascals),
            ("pressure_tau", &mut plant.pressure_tau),
            ("loadcell_sigma", &mut plant.loadcell_sigma),
            ("mu_sigma", &mut plant.mu_sigma),
            ("timestep", &mut plant.timestep),
            ("close_rate", &mut plant.close_rate),
            ("hold_time", &mut plant.hold_time),
            ("lift_time", &mut plant.lift_time),
            ("transport_time", &mut plant.transport_time),
            ("transport_factor", &mut plant.transport_factor),
        ];
        for (key, slot) in fields {
            if let Some((v, _)) = take_float(&entries, S, key) {
                *slot = v;
            }
        }
        if let Some(e) = entries.get(&(S, "seed")) {
            plant.seed = match e.value {
                Value::U64(v) => v,
                _ => unreachable!("kind catalog guarantees u64 storage"),
            };
        }
        plant.validate().map_err(|err| match err {
            Error::Validation { field, message } => {
                let line = canonical_key(S, &field)
                    .and_then(|k| entries.get(&(S, k)))
                    .map(|e| e.line);
                validation(&field, line, message)
            }
            other => other,
        })?;
    }

    // Grasp defaults.
    let mut grasp = GraspDefaults::default();
    {
        use Section::Grasp as S;
        if let Some((v, line)) = take_float(&entries, S, "mass") {
            if !(v.is_finite() && v >= 0.0) {
                return Err(validation(
                    "mass",
                    Some(line),
                    format!("must be non-negative and finite, got {v}"),
                ));
            }
            grasp.mass = Some(v);
        }
        if let Some((v, line)) = take_float(&entries, S, "gravity") {
            if !(v.is_finite() && v > 0.0) {
                return Err(validation(
                    "gravity",
                    Some(line),
                    format!("must be positive and finite, got {v}"),
                ));
            }
            grasp.gravity = v;
        }
        if let Some((v, line)) = take_float(&entries, S, "safety_factor") {
            if !(v.is_finite() && v > 0.0) {
                return Err(validation(
                    "safety_factor",
                    Some(line),
                    format!("must be positive and finite, got {v}"),
                ));
            }
            grasp.safety_factor = v;
        }
        for (key, slot) in [("contacts", &mut grasp.contacts), ("bulges", &mut grasp.bulges)] {
            if let Some(e) = entries.get(&(S, canonical_key(S, key).expect("cataloged"))) {
                let v = match e.value {
                    Value::U32(v) => v,
                    _ => unreachable!("kind catalog guarantees u32 storage"),
                };
                if v == 0 {
                    return Err(validation(key, Some(e.line), "must be at least 1".into()));
                }
                *slot = v;
            }
        }
    }

    // Sweep: required grids, ascending and non-negative.
    let sweep = if seen_sections.contains(&Section::Sweep) {
        use Section::Sweep as S;
        let mass = match take_float(&entries, S, "mass") {
            Some((v, line)) => {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(validation(
                        "mass",
                        Some(line),
                        format!("must be non-negative and finite, got {v}"),
                    ));
                }
                Some(v)
            }
            None => None,
        };
        let mut grids = Vec::new();
        for key in ["n_grid", "p_grid"] {
            let (grid, line) = take_list(&entries, S, canonical_key(S, key).expect("cataloged"))
                .ok_or_else(|| validation(key, None, "required in [sweep]".into()))?;
            for w in grid.windows(2) {
                // Negated `<` instead of `>=` so a NaN entry fails the check.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(w[0] < w[1]) {
                    return Err(validation(
                        key,
                        Some(line),
                        format!("must be strictly ascending, got {} then {}", w[0], w[1]),
                    ));
                }
            }
            if grid.iter().any(|v| *v < 0.0) {
                return Err(validation(key, Some(line), "entries must be non-negative".into()));
            }
            grids.push(grid);
        }
        let p_grid = grids.pop().expect("pushed above");
        let n_grid = grids.pop().expect("pushed above");
        Some(SweepDef { mass, n_grid, p_grid })
    } else {
        None
    };

    Ok(LoadedConfig {
        membrane,
        plant,
        grasp,
        sweep,
    })
}

/// Load and validate a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Canonical text form of a config: fixed section and key order, base SI
/// units, shortest round-trip number formatting. `parse_config` of the
/// output reproduces the input object exactly.
pub fn serialize_config(cfg: &LoadedConfig) -> String {
    let mut out = String::new();
    let m = &cfg.membrane;
    writeln!(out, "[membrane]").unwrap();
    for (key, v) in [
        ("sigma0", m.residual_stress),
        ("t", m.thickness),
        ("a", m.half_span),
        ("E", m.youngs_modulus),
        ("nu", m.poisson_ratio),
        ("h_max", m.max_height),
        ("g", m.rim_gap),
        ("E0", m.contact_modulus),
        ("eta", m.stiffening),
        ("tau_s", m.shear_strength),
        ("mu_rim", m.rim_friction),
    ] {
        writeln!(out, "{key} = {v}").unwrap();
    }

    let p = &cfg.plant;
    writeln!(out, "\n[plant]").unwrap();
    for (key, v) in [
        ("volts_to_pascals", p.volts_to_pascals),
        ("pressure_tau", p.pressure_tau),
        ("loadcell_sigma", p.loadcell_sigma),
        ("mu_sigma", p.mu_sigma),
        ("timestep", p.timestep),
    ] {
        writeln!(out, "{key} = {v}").unwrap();
    }
    writeln!(out, "seed = {}", p.seed).unwrap();
    for (key, v) in [
        ("close_rate", p.close_rate),
        ("hold_time", p.hold_time),
        ("lift_time", p.lift_time),
        ("transport_time", p.transport_time),
        ("transport_factor", p.transport_factor),
    ] {
        writeln!(out, "{key} = {v}").unwrap();
    }

    let g = &cfg.grasp;
    writeln!(out, "\n[grasp]").unwrap();
    if let Some(mass) = g.mass {
        writeln!(out, "mass = {mass}").unwrap();
    }
    writeln!(out, "gravity = {}", g.gravity).unwrap();
    writeln!(out, "contacts = {}", g.contacts).unwrap();
    writeln!(out, "safety_factor = {}", g.safety_factor).unwrap();
    writeln!(out, "bulges = {}", g.bulges).unwrap();

    if let Some(sweep) = &cfg.sweep {
        writeln!(out, "\n[sweep]").unwrap();
        if let Some(mass) = sweep.mass {
            writeln!(out, "mass = {mass}").unwrap();
        }
        for (key, grid) in [("n_grid", &sweep.n_grid), ("p_grid", &sweep.p_grid)] {
            let joined = grid
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(out, "{key} = {joined}").unwrap();
        }
    }
    out
}
