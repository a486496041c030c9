use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered variable names with a per-variable invertibility flag.
///
/// Polynomials hold their registry behind an `Arc`; two registries are
/// compatible when their names and flags agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarRegistry {
    names: Vec<String>,
    invertible: Vec<bool>,
    index: HashMap<String, usize>,
}

impl VarRegistry {
    pub fn new<I, S>(vars: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, bool)>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut invertible = Vec::new();
        let mut index = HashMap::new();
        for (name, inv) in vars {
            let name = name.into();
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicateVariable(name));
            }
            names.push(name);
            invertible.push(inv);
        }
        Ok(Arc::new(Self { names, invertible, index }))
    }

    /// Non-invertible variables followed by invertible ones.
    pub fn split<S: AsRef<str>>(plain: &[S], units: &[S]) -> Result<Arc<Self>> {
        Self::new(
            plain
                .iter()
                .map(|s| (s.as_ref().to_string(), false))
                .chain(units.iter().map(|s| (s.as_ref().to_string(), true))),
        )
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn invertible_flags(&self) -> &[bool] {
        &self.invertible
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// A new registry with `more` appended; names already present are skipped
    /// if their flag matches.
    pub fn extended<I, S>(&self, more: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = (S, bool)>,
        S: Into<String>,
    {
        let mut vars: Vec<(String, bool)> = self
            .names
            .iter()
            .cloned()
            .zip(self.invertible.iter().copied())
            .collect();
        for (name, inv) in more {
            let name = name.into();
            match self.index_of(&name) {
                Some(i) if self.invertible[i] == inv => {}
                Some(_) => return Err(Error::DuplicateVariable(name)),
                None => {
                    if vars.iter().any(|(n, _)| *n == name) {
                        return Err(Error::DuplicateVariable(name));
                    }
                    vars.push((name, inv));
                }
            }
        }
        Self::new(vars)
    }
}
