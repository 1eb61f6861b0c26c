//! JSON file formats.
//!
//! Instance: `{"m": 2, "s": 2, "classes": [[3, 3], [4]], "releases": {"0": 0}}`
//! with `releases` optional and keyed by job index in reading order.
//!
//! Schedule: `{"machines": [[{"setup": 0}, {"job": 0}, {"job": 1}], []]}`.
//!
//! Emitted text is pretty-printed with a trailing newline and is a pure
//! function of the value, so emit/parse/emit is byte-identical.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::model::RawInstance;
use crate::scalar::Time;
use crate::schedule::Schedule;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        source: serde_json::Error,
    },
}

fn emit<V: Serialize>(value: &V) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

fn parse<V: DeserializeOwned>(text: &str, context: &str) -> Result<V, FormatError> {
    serde_json::from_str(text).map_err(|source| FormatError::Json {
        context: context.to_string(),
        source,
    })
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn emit_instance<T: Time>(raw: &RawInstance<T>) -> String {
    emit(raw)
}

pub fn parse_instance<T: Time>(text: &str) -> Result<RawInstance<T>, FormatError> {
    parse(text, "instance")
}

pub fn read_instance<T: Time>(path: &Path) -> Result<RawInstance<T>, FormatError> {
    parse(&read(path)?, &path.display().to_string())
}

pub fn emit_schedule(schedule: &Schedule) -> String {
    emit(schedule)
}

pub fn parse_schedule(text: &str) -> Result<Schedule, FormatError> {
    parse(text, "schedule")
}

pub fn read_schedule(path: &Path) -> Result<Schedule, FormatError> {
    parse(&read(path)?, &path.display().to_string())
}

/// Any serializable value in the same style, e.g. an online timeline.
pub fn emit_json<V: Serialize>(value: &V) -> String {
    emit(value)
}
