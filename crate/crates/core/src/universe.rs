//! The finite universe of atoms that every frame partitions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{FcfError, Result};

/// An ordered finite set of named atoms. Frames over the same universe are
/// comparable; frames over different universes are not.
///
/// Cheap to clone (shared storage); equality is structural on the atom list.
#[derive(Clone)]
pub struct Universe {
    inner: Arc<Inner>,
}

struct Inner {
    atoms: Vec<String>,
    index: HashMap<String, u32>,
}

impl Universe {
    pub fn new<I, S>(atoms: I) -> Result<Universe>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(FcfError::EmptyUniverse);
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i as u32).is_some() {
                return Err(FcfError::DuplicateAtom(a.clone()));
            }
        }
        Ok(Universe {
            inner: Arc::new(Inner { atoms, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one atom
    }

    pub fn atom(&self, i: u32) -> &str {
        &self.inner.atoms[i as usize]
    }

    pub fn atom_index(&self, name: &str) -> Result<u32> {
        self.inner
            .index
            .get(name)
            .copied()
            .ok_or_else(|| FcfError::UnknownAtom(name.to_string()))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.inner.atoms.iter().map(String::as_str)
    }

    /// Pointer-equality fast path used by the hot comparison sites.
    pub(crate) fn same(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.atoms == other.inner.atoms
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Universe {}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{:?}", self.inner.atoms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(matches!(
            Universe::new(Vec::<String>::new()),
            Err(FcfError::EmptyUniverse)
        ));
        assert!(matches!(
            Universe::new(["1", "2", "1"]),
            Err(FcfError::DuplicateAtom(_))
        ));
    }

    #[test]
    fn indexes_atoms_in_order() {
        let u = Universe::new(["1", "2", "3"]).unwrap();
        assert_eq!(u.len(), 3);
        assert_eq!(u.atom(1), "2");
        assert_eq!(u.atom_index("3").unwrap(), 2);
        assert!(u.atom_index("4").is_err());
    }
}
