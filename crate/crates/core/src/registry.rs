//! Named, runtime-selectable algorithm variants.

use crate::arith::Prime;
use crate::curves::HyperellipticTwist;
use crate::error::{Error, Result};
use crate::localsol::{self, SolubilityVerdict};
use crate::poly::FpPolynomial;

pub trait Named {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
}

/// Decides whether `C_d(Q_p)` is nonempty.
pub trait SolubilityMethod: Named + Send + Sync {
    fn decide(
        &self,
        curve: &HyperellipticTwist,
        p: Prime,
        max_depth: Option<u32>,
    ) -> Result<SolubilityVerdict>;
}

/// Counts the distinct roots of a polynomial over F_p.
pub trait RootCounter: Named + Send + Sync {
    fn count_roots(&self, f: &FpPolynomial) -> Result<usize>;
}

pub struct Registry<T: ?Sized + Named> {
    entries: Vec<Box<T>>,
}

impl<T: ?Sized + Named> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: Vec::new() }
    }
}

impl<T: ?Sized + Named> Registry<T> {
    /// Adds a variant, replacing any earlier one of the same name.
    pub fn register(&mut self, entry: Box<T>) {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// The first registered variant.
    pub fn default_entry(&self) -> Option<&T> {
        self.entries.first().map(|e| e.as_ref())
    }
}

pub struct ResidueTree;

impl Named for ResidueTree {
    fn name(&self) -> &'static str {
        "residue-tree"
    }
    fn summary(&self) -> &'static str {
        "exhaustive p-adic residue class search with certified witnesses"
    }
}

impl SolubilityMethod for ResidueTree {
    fn decide(
        &self,
        curve: &HyperellipticTwist,
        p: Prime,
        max_depth: Option<u32>,
    ) -> Result<SolubilityVerdict> {
        localsol::is_locally_soluble(curve, p, max_depth)
    }
}

pub struct GoodReduction;

impl Named for GoodReduction {
    fn name(&self) -> &'static str {
        "good-reduction"
    }
    fn summary(&self) -> &'static str {
        "lift a smooth F_p-point; needs good reduction, p not dividing d, p > 4g^2"
    }
}

impl SolubilityMethod for GoodReduction {
    fn decide(
        &self,
        curve: &HyperellipticTwist,
        p: Prime,
        _max_depth: Option<u32>,
    ) -> Result<SolubilityVerdict> {
        localsol::good_reduction_soluble(curve, p)
    }
}

pub struct GcdRootCounter;

impl Named for GcdRootCounter {
    fn name(&self) -> &'static str {
        "gcd"
    }
    fn summary(&self) -> &'static str {
        "degree of gcd(x^p - x, f)"
    }
}

impl RootCounter for GcdRootCounter {
    fn count_roots(&self, f: &FpPolynomial) -> Result<usize> {
        f.root_count()
    }
}

pub struct ExhaustiveRootCounter;

impl Named for ExhaustiveRootCounter {
    fn name(&self) -> &'static str {
        "exhaustive"
    }
    fn summary(&self) -> &'static str {
        "evaluate f at every element of F_p"
    }
}

impl RootCounter for ExhaustiveRootCounter {
    fn count_roots(&self, f: &FpPolynomial) -> Result<usize> {
        f.root_count_exhaustive()
    }
}

pub fn solubility_methods() -> Registry<dyn SolubilityMethod> {
    let mut r: Registry<dyn SolubilityMethod> = Registry::default();
    r.register(Box::new(ResidueTree));
    r.register(Box::new(GoodReduction));
    r
}

pub fn root_counters() -> Registry<dyn RootCounter> {
    let mut r: Registry<dyn RootCounter> = Registry::default();
    r.register(Box::new(GcdRootCounter));
    r.register(Box::new(ExhaustiveRootCounter));
    r
}
