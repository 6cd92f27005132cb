//! Name-keyed registries for interchangeable algorithm implementations.

use crate::error::{Error, Result};

/// Anything that can be selected by name at runtime.
pub trait Named {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str {
        ""
    }
}

pub struct Registry<T: ?Sized + Named> {
    kind: &'static str,
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: Vec::new(),
        }
    }

    /// Adds an entry. Duplicate names are rejected.
    pub fn register(&mut self, entry: Box<T>) -> Result<()> {
        if self.entries.iter().any(|e| e.name() == entry.name()) {
            return Err(Error::Config(format!(
                "duplicate {} `{}`",
                self.kind,
                entry.name()
            )));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn with(mut self, entry: Box<T>) -> Self {
        self.register(entry).expect("built-in names are unique");
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: self.kind,
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.entries.iter().map(|b| b.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Op: Named {
        fn apply(&self, x: i32) -> i32;
    }
    struct Double;
    impl Named for Double {
        fn name(&self) -> &'static str {
            "double"
        }
    }
    impl Op for Double {
        fn apply(&self, x: i32) -> i32 {
            2 * x
        }
    }

    #[test]
    fn lookup_and_duplicates() {
        let mut r: Registry<dyn Op> = Registry::new("op");
        r.register(Box::new(Double)).unwrap();
        assert_eq!(r.get("double").unwrap().apply(4), 8);
        assert!(r.register(Box::new(Double)).is_err());
        let err = r.get("triple").err().unwrap().to_string();
        assert!(err.contains("unknown op `triple`") && err.contains("double"));
    }
}
