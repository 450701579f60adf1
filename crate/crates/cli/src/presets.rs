//! Scenarios shipped with the binary.

use serde_json::Value;

pub const PRESETS: [(&str, &str); 6] = [
    ("prop-2.7-exhaustive", include_str!("../presets/prop-2.7-exhaustive.json")),
    ("remark-3.5-solenoid", include_str!("../presets/remark-3.5-solenoid.json")),
    ("remark-3.5-torus", include_str!("../presets/remark-3.5-torus.json")),
    ("remark-3.5-z2-blocks", include_str!("../presets/remark-3.5-z2-blocks.json")),
    ("theorem-2.1-z25", include_str!("../presets/theorem-2.1-z25.json")),
    ("tower-5-7", include_str!("../presets/tower-5-7.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn description(text: &str) -> String {
    serde_json::from_str::<Value>(text)
        .ok()
        .and_then(|v| v.get("description").and_then(Value::as_str).map(str::to_string))
        .unwrap_or_default()
}
