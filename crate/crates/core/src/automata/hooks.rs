//! Named hooks fired on automaton events.
//!
//! Hooks are referenced by name so an automaton stays serializable. Built-in
//! names take a key (and sometimes a bound) after a colon:
//!
//! | name              | event        | behavior                                        |
//! |-------------------|--------------|-------------------------------------------------|
//! | `push:KEY`        | any          | push the token surface (or node id) on stack KEY |
//! | `pop:KEY`         | before-shift | veto when stack KEY is empty, otherwise pop      |
//! | `pop_last:KEY`    | before-shift | veto unless stack KEY holds exactly one element, then pop |
//! | `inc:KEY`         | any          | increment counter KEY                            |
//! | `guard_lt:KEY:N`  | before-shift | veto unless counter KEY < N                      |
//! | `flag_set:KEY`    | any          | set boolean KEY to true                          |
//! | `flag_clear:KEY`  | any          | set boolean KEY to false                         |
//! | `flag_guard:KEY`  | before-shift | veto unless boolean KEY is true                  |
//!
//! Additional hooks are registered in code with [`HookRegistry::register`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::context::{ContextStore, Value};
use crate::token::Token;

/// The event a hook is fired for.
#[derive(Debug, Clone, Copy)]
pub enum HookEvent<'a> {
    BeforeShift { token: &'a Token },
    AfterShift { token: &'a Token },
    NodeReached { node: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookError(pub String);

impl fmt::Display for HookError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Behavior attached to an edge or node.
///
/// The returned flag is the admissibility verdict; it is only consulted for
/// before-shift events, where `false` vetoes the transition.
pub trait Hook: Send + Sync {
    fn fire(&self, ctx: &mut ContextStore, event: &HookEvent<'_>) -> Result<bool, HookError>;
}

impl<F> Hook for F
where
    F: Fn(&mut ContextStore, &HookEvent<'_>) -> Result<bool, HookError> + Send + Sync,
{
    fn fire(&self, ctx: &mut ContextStore, event: &HookEvent<'_>) -> Result<bool, HookError> {
        self(ctx, event)
    }
}

/// Resolves hook names to behaviors.
#[derive(Clone, Default)]
pub struct HookRegistry {
    custom: HashMap<String, Arc<dyn Hook>>,
}

impl fmt::Debug for HookRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.custom.keys().collect();
        names.sort();
        f.debug_struct("HookRegistry").field("custom", &names).finish()
    }
}

impl HookRegistry {
    /// Registry with only the built-in hooks.
    pub fn builtin() -> HookRegistry {
        HookRegistry::default()
    }

    /// Registers a hook under an exact name. Custom names shadow built-ins.
    pub fn register(&mut self, name: impl Into<String>, hook: Arc<dyn Hook>) -> &mut Self {
        self.custom.insert(name.into(), hook);
        self
    }

    pub fn resolve(&self, name: &str) -> Option<Arc<dyn Hook>> {
        if let Some(h) = self.custom.get(name) {
            return Some(h.clone());
        }
        Builtin::parse(name).map(|b| Arc::new(b) as Arc<dyn Hook>)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Builtin {
    Push(String),
    Pop(String),
    PopLast(String),
    Inc(String),
    GuardLt(String, u64),
    FlagSet(String),
    FlagClear(String),
    FlagGuard(String),
}

impl Builtin {
    fn parse(name: &str) -> Option<Builtin> {
        let mut parts = name.split(':');
        let op = parts.next()?;
        let key = parts.next().filter(|k| !k.is_empty())?.to_string();
        let arg = parts.next();
        if parts.next().is_some() {
            return None;
        }
        let b = match (op, arg) {
            ("push", None) => Builtin::Push(key),
            ("pop", None) => Builtin::Pop(key),
            ("pop_last", None) => Builtin::PopLast(key),
            ("inc", None) => Builtin::Inc(key),
            ("guard_lt", Some(n)) => Builtin::GuardLt(key, n.parse().ok()?),
            ("flag_set", None) => Builtin::FlagSet(key),
            ("flag_clear", None) => Builtin::FlagClear(key),
            ("flag_guard", None) => Builtin::FlagGuard(key),
            _ => return None,
        };
        Some(b)
    }
}

fn stack_mut<'a>(ctx: &'a mut ContextStore, key: &str) -> Result<&'a mut Vec<Value>, HookError> {
    if ctx.get(key).is_none() {
        ctx.insert(key, Value::Stack(Vec::new()));
    }
    match ctx.get_mut(key) {
        Some(Value::Stack(s)) => Ok(s),
        Some(other) => Err(type_error(key, "stack", other)),
        None => unreachable!(),
    }
}

fn type_error(key: &str, expected: &str, found: &Value) -> HookError {
    HookError(format!("context key `{key}` holds {}, expected {expected}", found.type_name()))
}

impl Hook for Builtin {
    fn fire(&self, ctx: &mut ContextStore, event: &HookEvent<'_>) -> Result<bool, HookError> {
        match self {
            Builtin::Push(key) => {
                let v = match event {
                    HookEvent::BeforeShift { token } | HookEvent::AfterShift { token } => {
                        Value::Str(token.surface.clone())
                    }
                    HookEvent::NodeReached { node } => Value::Int(i64::from(*node)),
                };
                stack_mut(ctx, key)?.push(v);
                Ok(true)
            }
            Builtin::Pop(key) => {
                let s = stack_mut(ctx, key)?;
                Ok(s.pop().is_some())
            }
            Builtin::PopLast(key) => {
                let s = stack_mut(ctx, key)?;
                if s.len() == 1 {
                    s.pop();
                    Ok(true)
                } else {
                    Ok(false)
                }
            }
            Builtin::Inc(key) => {
                let n = match ctx.get(key) {
                    None => 0,
                    Some(Value::Counter(n)) => *n,
                    Some(other) => return Err(type_error(key, "counter", other)),
                };
                ctx.insert(key.clone(), Value::Counter(n + 1));
                Ok(true)
            }
            Builtin::GuardLt(key, bound) => match ctx.get(key) {
                None => Ok(0 < *bound),
                Some(Value::Counter(n)) => Ok(n < bound),
                Some(other) => Err(type_error(key, "counter", other)),
            },
            Builtin::FlagSet(key) => {
                ctx.insert(key.clone(), Value::Bool(true));
                Ok(true)
            }
            Builtin::FlagClear(key) => {
                ctx.insert(key.clone(), Value::Bool(false));
                Ok(true)
            }
            Builtin::FlagGuard(key) => match ctx.get(key) {
                None => Ok(false),
                Some(Value::Bool(b)) => Ok(*b),
                Some(other) => Err(type_error(key, "boolean", other)),
            },
        }
    }
}
