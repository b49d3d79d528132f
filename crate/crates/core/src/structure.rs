//! Finite relational structures and the constructions built from them:
//! products, powers, power structures, peek-power substructures, and
//! expansions by unary relations.
//!
//! Elements are canonical small integers `0..n`. Power-structure elements
//! carry the subset they stand for as a bitmask; product elements carry the
//! tuple of factor elements. All constructions are deterministic: universes
//! are emitted in a fixed order and relation tuple sets are kept sorted and
//! deduplicated.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::limits::Limits;

/// Index of an element within a structure's universe.
pub type Element = usize;

/// Index of a relation symbol within a signature.
pub type SymbolId = usize;

/// A finite set of relation symbols with arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    /// Builds a signature, rejecting duplicate names and zero arities.
    pub fn new<S: Into<String>>(symbols: Vec<(S, usize)>) -> Result<Self> {
        let symbols: Vec<(String, usize)> = symbols
            .into_iter()
            .map(|(name, arity)| (name.into(), arity))
            .collect();
        let mut seen = BTreeSet::new();
        for (name, arity) in &symbols {
            if *arity == 0 {
                return Err(Error::Invalid(format!("symbol `{name}` has arity 0")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: SymbolId) -> usize {
        self.symbols[sym].1
    }

    pub fn name(&self, sym: SymbolId) -> &str {
        &self.symbols[sym].0
    }

    pub fn id(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|(n, _)| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &str, usize)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, (n, a))| (i, n.as_str(), *a))
    }

    /// Signature extended by a fresh symbol.
    fn extended(&self, name: &str, arity: usize) -> Result<Self> {
        if self.id(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        let mut symbols = self.symbols.clone();
        symbols.push((name.to_string(), arity));
        Ok(Signature { symbols })
    }
}

/// What an element of a constructed universe stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementLabel {
    /// An atom with a display name (file-parsed or hand-built structures).
    Named(String),
    /// A nonempty subset of a base universe, as a bitmask (power structures).
    Subset(u64),
    /// A tuple of elements of the factor structures (products and powers).
    Tuple(Vec<Element>),
}

impl ElementLabel {
    pub fn render(&self) -> String {
        match self {
            ElementLabel::Named(s) => s.clone(),
            ElementLabel::Subset(mask) => {
                let elems: Vec<String> =
                    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
                format!("{{{}}}", elems.join(","))
            }
            ElementLabel::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
    }
}

/// A finite relational structure: a signature, an ordered universe, and one
/// tuple set per symbol. Doubles as constraint template and as instance.
///
/// Immutable after construction; relation tuple sets are sorted and free of
/// duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Signature,
    labels: Vec<ElementLabel>,
    relations: Vec<Vec<Vec<Element>>>,
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(|U|={}", self.size())?;
        for (sym, name, _) in self.signature.iter() {
            write!(f, ", {}:{}t", name, self.relations[sym].len())?;
        }
        write!(f, ")")
    }
}

impl Structure {
    /// Builds a structure over `signature` with `size` elements named
    /// `e0..e{size-1}` and the given `(symbol name, tuples)` relation list.
    /// Tuples are validated, sorted, and deduplicated.
    pub fn new<S: AsRef<str>>(
        signature: Signature,
        size: usize,
        relations: Vec<(S, Vec<Vec<Element>>)>,
    ) -> Result<Self> {
        let labels = (0..size).map(|i| ElementLabel::Named(format!("e{i}"))).collect();
        Self::with_labels(signature, labels, relations)
    }

    /// As [`Structure::new`] but with explicit element labels.
    pub fn with_labels<S: AsRef<str>>(
        signature: Signature,
        labels: Vec<ElementLabel>,
        relations: Vec<(S, Vec<Vec<Element>>)>,
    ) -> Result<Self> {
        let size = labels.len();
        let mut tables: Vec<BTreeSet<Vec<Element>>> = vec![BTreeSet::new(); signature.len()];
        for (name, tuples) in relations {
            let name = name.as_ref();
            let sym = signature
                .id(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            let arity = signature.arity(sym);
            for tuple in tuples {
                if tuple.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: name.to_string(),
                        expected: arity,
                        got: tuple.len(),
                    });
                }
                for &e in &tuple {
                    if e >= size {
                        return Err(Error::ForeignElement { element: e, universe: size });
                    }
                }
                tables[sym].insert(tuple);
            }
        }
        Ok(Structure {
            signature,
            labels,
            relations: tables.into_iter().map(|t| t.into_iter().collect()).collect(),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// Number of elements in the universe.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.size()
    }

    pub fn label(&self, e: Element) -> &ElementLabel {
        &self.labels[e]
    }

    /// Display name of an element.
    pub fn element_name(&self, e: Element) -> String {
        self.labels[e].render()
    }

    /// Element with the given `Named` label, if any.
    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        self.labels
            .iter()
            .position(|l| matches!(l, ElementLabel::Named(n) if n == name))
    }

    /// The sorted, duplicate-free tuple set of a symbol.
    pub fn relation(&self, sym: SymbolId) -> &[Vec<Element>] {
        &self.relations[sym]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&[Vec<Element>]> {
        self.signature.id(name).map(|sym| self.relation(sym))
    }

    pub fn has_tuple(&self, sym: SymbolId, tuple: &[Element]) -> bool {
        self.relations[sym]
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .is_ok()
    }

    /// Total number of tuples across all relations.
    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(|r| r.len()).sum()
    }

    /// The subset bitmask of a power-structure element, if this element was
    /// produced by [`power_structure`].
    pub fn subset_mask(&self, e: Element) -> Option<u64> {
        match self.labels[e] {
            ElementLabel::Subset(mask) => Some(mask),
            _ => None,
        }
    }

    fn check_same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.signature
                    .iter()
                    .map(|(_, n, a)| format!("{n}/{a}"))
                    .collect::<Vec<_>>(),
                other
                    .signature
                    .iter()
                    .map(|(_, n, a)| format!("{n}/{a}"))
                    .collect::<Vec<_>>(),
            )));
        }
        Ok(())
    }
}

/// The power structure: universe = all nonempty subsets of `base`'s universe
/// (ordered by bitmask value), and for each symbol `R` the projections
/// `(p1(S), ..., pk(S))` of every nonempty `S` contained in the base relation.
///
/// Distinct projection tuples are enumerated as the union-closure of the
/// single-tuple projections, so the cost is proportional to the output, not
/// to `2^|R|`.
pub fn power_structure(base: &Structure, limits: &Limits) -> Result<Structure> {
    let n = base.size();
    if n > limits.power_universe {
        return Err(Error::UniverseCap { size: n, cap: limits.power_universe });
    }
    let universe_size = (1usize << n) - 1;
    // element id of mask m (1-based masks) is m - 1
    let labels: Vec<ElementLabel> =
        (1..=universe_size as u64).map(ElementLabel::Subset).collect();

    let mut relations: Vec<(String, Vec<Vec<Element>>)> = Vec::new();
    for (sym, name, arity) in base.signature().iter() {
        let atoms: Vec<Vec<u64>> = base
            .relation(sym)
            .iter()
            .map(|t| t.iter().map(|&e| 1u64 << e).collect())
            .collect();
        let closed = union_closure(&atoms, arity);
        let tuples: Vec<Vec<Element>> = closed
            .into_iter()
            .map(|masks| masks.into_iter().map(|m| (m - 1) as Element).collect())
            .collect();
        relations.push((name.to_string(), tuples));
    }
    Structure::with_labels(base.signature().clone(), labels, relations)
}

/// All pointwise unions of nonempty subsets of `atoms`, each atom a tuple of
/// singleton bitmasks. Computed by closing the atom set under union with
/// atoms, which reaches every subset-union because unions fold one atom at a
/// time.
fn union_closure(atoms: &[Vec<u64>], arity: usize) -> BTreeSet<Vec<u64>> {
    let mut closed: BTreeSet<Vec<u64>> = atoms.iter().cloned().collect();
    let mut frontier: Vec<Vec<u64>> = closed.iter().cloned().collect();
    while let Some(current) = frontier.pop() {
        for atom in atoms {
            let mut merged = Vec::with_capacity(arity);
            for i in 0..arity {
                merged.push(current[i] | atom[i]);
            }
            if !closed.contains(&merged) {
                closed.insert(merged.clone());
                frontier.push(merged);
            }
        }
    }
    closed
}

/// The product structure of two structures over the same signature. The
/// universe is the cartesian product in row-major order; elements are
/// labelled with `(a, b)` pairs flattened from the factors' tuple labels
/// where present.
pub fn product(a: &Structure, b: &Structure, limits: &Limits) -> Result<Structure> {
    a.check_same_signature(b)?;
    let size = a.size() * b.size();
    if size > limits.product_universe {
        return Err(Error::UniverseCap { size, cap: limits.product_universe });
    }
    let mut labels = Vec::with_capacity(size);
    for ea in a.elements() {
        for eb in b.elements() {
            labels.push(ElementLabel::Tuple(vec![ea, eb]));
        }
    }
    let pair = |ea: Element, eb: Element| ea * b.size() + eb;
    let mut relations = Vec::new();
    for (sym, name, arity) in a.signature().iter() {
        let mut tuples = Vec::new();
        for ta in a.relation(sym) {
            for tb in b.relation(sym) {
                tuples.push((0..arity).map(|i| pair(ta[i], tb[i])).collect());
            }
        }
        relations.push((name.to_string(), tuples));
    }
    Structure::with_labels(a.signature().clone(), labels, relations)
}

/// The n-fold product of a structure with itself, with flat n-tuples as
/// elements (lexicographic order).
pub fn power(base: &Structure, n: usize, limits: &Limits) -> Result<Structure> {
    if n == 0 {
        return Err(Error::Invalid("power requires n >= 1".into()));
    }
    let size = base.size().checked_pow(n as u32).ok_or(Error::UniverseCap {
        size: usize::MAX,
        cap: limits.product_universe,
    })?;
    if size > limits.product_universe {
        return Err(Error::UniverseCap { size, cap: limits.product_universe });
    }
    let labels: Vec<ElementLabel> =
        tuples_lex(base.size(), n).map(ElementLabel::Tuple).collect();
    let index = |t: &[Element]| -> Element {
        t.iter().fold(0, |acc, &e| acc * base.size() + e)
    };
    let mut relations = Vec::new();
    for (sym, name, arity) in base.signature().iter() {
        let rel = base.relation(sym);
        let mut tuples = Vec::new();
        // one base tuple per coordinate of the power
        for combo in tuples_lex(rel.len(), n) {
            let tuple: Vec<Element> = (0..arity)
                .map(|i| {
                    let coords: Vec<Element> = combo.iter().map(|&c| rel[c][i]).collect();
                    index(&coords)
                })
                .collect();
            tuples.push(tuple);
        }
        relations.push((name.to_string(), tuples));
    }
    Structure::with_labels(base.signature().clone(), labels, relations)
}

/// Iterator over all length-`len` tuples with entries in `0..size`, in
/// lexicographic order.
pub fn tuples_lex(size: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total: Option<usize> = size.checked_pow(len as u32);
    let total = if len == 0 { 1 } else { total.unwrap_or(0) };
    (0..total).map(move |mut idx| {
        let mut t = vec![0; len];
        for slot in (0..len).rev() {
            t[slot] = idx % size;
            idx /= size;
        }
        t
    })
}

/// The induced substructure of `power(p, n)` on the n-tuples having at least
/// one singleton coordinate, where `p` must itself be a power structure (its
/// elements carry subset masks). Relations are the full power relations
/// restricted to tuples over the surviving universe.
pub fn ind_peek_power(p: &Structure, n: usize, limits: &Limits) -> Result<Structure> {
    if n == 0 {
        return Err(Error::Invalid("peek power requires n >= 1".into()));
    }
    let singleton: Vec<bool> = p
        .elements()
        .map(|e| {
            p.subset_mask(e)
                .map(|m| m.count_ones() == 1)
                .ok_or_else(|| Error::Invalid("ind_peek_power needs a power structure".into()))
        })
        .collect::<Result<_>>()?;

    let full_size = p.size().checked_pow(n as u32).ok_or(Error::UniverseCap {
        size: usize::MAX,
        cap: limits.product_universe,
    })?;
    if full_size > limits.product_universe {
        return Err(Error::UniverseCap { size: full_size, cap: limits.product_universe });
    }

    // map from full-power index to restricted index
    let mut keep: Vec<Option<Element>> = vec![None; full_size];
    let mut labels = Vec::new();
    for (idx, tuple) in tuples_lex(p.size(), n).enumerate() {
        if tuple.iter().any(|&e| singleton[e]) {
            keep[idx] = Some(labels.len());
            labels.push(ElementLabel::Tuple(tuple));
        }
    }
    let index = |t: &[Element]| -> Element {
        t.iter().fold(0, |acc, &e| acc * p.size() + e)
    };

    let mut relations = Vec::new();
    for (sym, name, arity) in p.signature().iter() {
        let rel = p.relation(sym);
        let mut tuples = Vec::new();
        'combo: for combo in tuples_lex(rel.len(), n) {
            let mut tuple = Vec::with_capacity(arity);
            // i ranges over tuple positions, reading one column of the
            // chosen relation tuples
            #[allow(clippy::needless_range_loop)]
            for i in 0..arity {
                let coords: Vec<Element> = combo.iter().map(|&c| rel[c][i]).collect();
                match keep[index(&coords)] {
                    Some(e) => tuple.push(e),
                    None => continue 'combo,
                }
            }
            tuples.push(tuple);
        }
        relations.push((name.to_string(), tuples));
    }
    Structure::with_labels(p.signature().clone(), labels, relations)
}

/// Reserved symbol name used by [`expand_with_unary`].
pub const PEEK_SYMBOL: &str = "U";

/// Expands a structure by a fresh unary symbol `U` interpreted as `s`.
pub fn expand_with_unary(a: &Structure, s: &[Element]) -> Result<Structure> {
    for &e in s {
        if e >= a.size() {
            return Err(Error::ForeignElement { element: e, universe: a.size() });
        }
    }
    let signature = a.signature().extended(PEEK_SYMBOL, 1)?;
    let mut relations: Vec<(String, Vec<Vec<Element>>)> = a
        .signature()
        .iter()
        .map(|(sym, name, _)| (name.to_string(), a.relation(sym).to_vec()))
        .collect();
    relations.push((PEEK_SYMBOL.to_string(), s.iter().map(|&e| vec![e]).collect()));
    Structure::with_labels(signature, a.labels.clone(), relations)
}

/// The induced substructure on the given subset of the universe (kept in
/// canonical order, deduplicated).
pub fn induced_substructure(b: &Structure, subset: &[Element]) -> Result<Structure> {
    let mut chosen: Vec<Element> = subset.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    for &e in &chosen {
        if e >= b.size() {
            return Err(Error::ForeignElement { element: e, universe: b.size() });
        }
    }
    let mut back: Vec<Option<Element>> = vec![None; b.size()];
    for (new, &old) in chosen.iter().enumerate() {
        back[old] = Some(new);
    }
    let labels: Vec<ElementLabel> = chosen.iter().map(|&e| b.labels[e].clone()).collect();
    let mut relations = Vec::new();
    for (sym, name, _) in b.signature().iter() {
        let tuples: Vec<Vec<Element>> = b
            .relation(sym)
            .iter()
            .filter_map(|t| t.iter().map(|&e| back[e]).collect::<Option<Vec<_>>>())
            .collect();
        relations.push((name.to_string(), tuples));
    }
    Structure::with_labels(b.signature().clone(), labels, relations)
}
