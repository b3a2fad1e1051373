use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A value held in the automaton's key-value storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum Value {
    Int(i64),
    Str(String),
    Bool(bool),
    /// A list used as a stack; the top is the last element.
    Stack(Vec<Value>),
    Counter(u64),
}

impl Value {
    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Str(_) => "string",
            Value::Bool(_) => "boolean",
            Value::Stack(_) => "stack",
            Value::Counter(_) => "counter",
        }
    }
}

/// Key-value storage attached to a running automaton.
///
/// Backed by an ordered map so two stores with the same entries compare (and
/// serialize) identically.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextStore {
    entries: BTreeMap<String, Value>,
}

impl ContextStore {
    pub fn new() -> ContextStore {
        ContextStore::default()
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn get_mut(&mut self, key: &str) -> Option<&mut Value> {
        self.entries.get_mut(key)
    }

    pub fn insert(&mut self, key: impl Into<String>, value: Value) -> Option<Value> {
        self.entries.insert(key.into(), value)
    }

    pub fn remove(&mut self, key: &str) -> Option<Value> {
        self.entries.remove(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.entries.iter()
    }

    /// Current counter value, 0 when the key is absent.
    pub fn counter(&self, key: &str) -> Option<u64> {
        match self.entries.get(key) {
            None => Some(0),
            Some(Value::Counter(n)) => Some(*n),
            Some(_) => None,
        }
    }

    /// Stack depth, 0 when the key is absent.
    pub fn stack_len(&self, key: &str) -> Option<usize> {
        match self.entries.get(key) {
            None => Some(0),
            Some(Value::Stack(s)) => Some(s.len()),
            Some(_) => None,
        }
    }
}
