//! The versioned JSON schemas under `schemas/v1`, embedded at build time.

use crate::Command;

macro_rules! schema {
    ($name:literal) => {
        ($name, include_str!(concat!("../../../schemas/v1/", $name, ".schema.json")))
    };
}

/// `(name, text)` for every schema.
pub const ALL: [(&str, &str); 10] = [
    schema!("envelope"),
    schema!("common"),
    schema!("curve_spec"),
    schema!("quiver_spec"),
    schema!("family"),
    schema!("analyze"),
    schema!("dims"),
    schema!("verify"),
    schema!("deform"),
    schema!("quiver"),
];

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Schema ids follow `urn:wildchar:schema:v1:<name>`; a test checks each
/// file's `$id` against this.
pub fn id(name: &str) -> String {
    format!("urn:wildchar:schema:v1:{name}")
}

pub fn payload_id(command: Command) -> String {
    id(command.name())
}
