use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::DEFAULT_CAP;
use crate::dynamics::{Conventions, Letter};
use crate::error::Result;
use crate::families::{template, FamilyId};
use crate::operator::{build_s, build_t, CPElement};
use crate::sgraph::{canonical_code, induced_operator, isomorphic, CanonicalCode, SGraph};

/// A generated family graph with the data classification needs.
#[derive(Clone, Debug)]
pub struct Template {
    pub id: FamilyId,
    pub graph: SGraph,
    pub code: Option<CanonicalCode>,
    pub kernel_dim: usize,
}

/// Templates generated on first use and shared between threads.
#[derive(Debug)]
pub struct TemplateCache {
    conv: Conventions,
    s: CPElement,
    t: CPElement,
    templates: RwLock<HashMap<FamilyId, Arc<Template>>>,
}

impl TemplateCache {
    pub fn new(conv: Conventions) -> Self {
        let s = build_s(&conv);
        let t = build_t(&s);
        Self::with_operators(conv, s, t)
    }

    pub fn with_operators(conv: Conventions, s: CPElement, t: CPElement) -> Self {
        TemplateCache {
            conv,
            s,
            t,
            templates: RwLock::new(HashMap::new()),
        }
    }

    pub fn conventions(&self) -> &Conventions {
        &self.conv
    }

    pub fn s(&self) -> &CPElement {
        &self.s
    }

    pub fn t(&self) -> &CPElement {
        &self.t
    }

    pub fn get(&self, id: FamilyId) -> Result<Arc<Template>> {
        if let Some(t) = self.templates.read().expect("cache poisoned").get(&id) {
            return Ok(Arc::clone(t));
        }
        let graph = template(id, &self.s, &self.conv, DEFAULT_CAP)?;
        let kernel_dim = induced_operator(&graph, &self.t)?.kernel_dimension();
        let built = Arc::new(Template {
            id,
            code: canonical_code(&graph),
            graph,
            kernel_dim,
        });
        let mut map = self.templates.write().expect("cache poisoned");
        Ok(Arc::clone(map.entry(id).or_insert(built)))
    }
}

/// The only family whose letter counts match, if any.
pub fn candidate(g: &SGraph) -> FamilyId {
    let mut n = [0u32; 7];
    for piece in g.labels() {
        let slot = match piece.letter() {
            Some(Letter::A) => 0,
            Some(Letter::B) => 1,
            Some(Letter::C) => 2,
            Some(Letter::D) => 3,
            Some(Letter::F) => 4,
            Some(Letter::I) => 5,
            _ => 6,
        };
        n[slot] += 1;
    }
    let [a, b, c, d, f, i, u] = n;
    match (a, b, c, d, f, i, u) {
        (0, 0, 0, 0, 0, 0, 1) => FamilyId::U,
        (k, k2, 0, 0, 0, 0, 0) if k == k2 && k >= 1 => FamilyId::G(k),
        (0, 0, l, l2, 1, 0, 0) if l == l2 && l >= 1 => FamilyId::H(l),
        (k, k2, l, l2, 1, 1, 0) if k == k2 && l == l2 && k >= 1 && l >= 1 => FamilyId::J(k, l),
        _ => FamilyId::Unknown,
    }
}

/// Matches `g` against the template of its candidate family, by canonical
/// code when both have one and by isomorphism search otherwise.
pub fn classify(g: &SGraph, cache: &TemplateCache) -> Result<FamilyId> {
    let id = candidate(g);
    if id == FamilyId::Unknown {
        return Ok(id);
    }
    let t = cache.get(id)?;
    let matches = match (&t.code, canonical_code(g)) {
        (Some(a), Some(b)) => *a == b,
        _ => isomorphic(g, &t.graph),
    };
    Ok(if matches { id } else { FamilyId::Unknown })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposer::closure_from_point;
    use crate::families::seed_point;

    #[test]
    fn seeds_classify_to_their_family() {
        let cache = TemplateCache::new(Conventions::canonical());
        for id in [FamilyId::U, FamilyId::G(3), FamilyId::H(2), FamilyId::J(2, 3)] {
            let x = seed_point(id, cache.conventions(), 5).unwrap();
            let c = closure_from_point(&x, cache.s(), DEFAULT_CAP).unwrap();
            assert_eq!(classify(&c.graph, &cache).unwrap(), id);
        }
        assert_eq!(cache.get(FamilyId::G(3)).unwrap().graph.vertex_count(), 6);
        assert_eq!(cache.get(FamilyId::J(2, 3)).unwrap().graph.vertex_count(), 12);
    }
}
