//! Partitions of a ground space, the refinement order, common refinement,
//! tagged partitions, and budgeted refinement streams.
//!
//! On the naturals a countable partition is held as finitely many explicit
//! blocks plus an optional singleton-tail region standing for "every
//! remaining point is its own block"; the all-singletons partition is the
//! maximum of the refinement order and is what pins integral values down.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ground::{EpSet, GroundSpace, MeasurableSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    space: GroundSpace,
    blocks: Vec<MeasurableSet>,
    /// Region implicitly partitioned into singleton blocks (naturals only).
    singleton_tail: Option<MeasurableSet>,
}

impl Partition {
    /// Explicit blocks covering the space exactly.
    pub fn new(space: GroundSpace, blocks: Vec<MeasurableSet>) -> Result<Self> {
        Self::build(space, blocks, false)
    }

    /// Explicit blocks; everything not covered becomes singleton blocks.
    pub fn with_singleton_tail(space: GroundSpace, blocks: Vec<MeasurableSet>) -> Result<Self> {
        Self::build(space, blocks, true)
    }

    fn build(space: GroundSpace, blocks: Vec<MeasurableSet>, tail: bool) -> Result<Self> {
        let mut union = MeasurableSet::empty(space);
        for (i, b) in blocks.iter().enumerate() {
            if b.space() != space {
                return Err(Error::SpaceMismatch);
            }
            if b.is_empty() {
                return Err(Error::Invalid(format!("partition block {i} is empty")));
            }
            if !union.is_disjoint_from(b)? {
                return Err(Error::Invalid(format!("partition block {i} overlaps earlier blocks")));
            }
            union = union.union(b)?;
        }
        let rest = MeasurableSet::full(space).difference(&union)?;
        if !tail {
            if !rest.is_empty() {
                return Err(Error::Invalid(format!(
                    "partition blocks do not cover the space; missing {rest}"
                )));
            }
            return Ok(Partition { space, blocks, singleton_tail: None });
        }
        match space {
            // on a finite space the tail is just more explicit blocks
            GroundSpace::Finite(_) => {
                let mut blocks = blocks;
                for s in rest.members()? {
                    blocks.push(MeasurableSet::finite_from_members(space.len().unwrap(), &[s])?);
                }
                Ok(Partition { space, blocks, singleton_tail: None })
            }
            GroundSpace::CountableNat => {
                let singleton_tail = if rest.is_empty() { None } else { Some(rest) };
                Ok(Partition { space, blocks, singleton_tail })
            }
        }
    }

    /// The one-block partition.
    pub fn coarsest(space: GroundSpace) -> Self {
        Partition {
            space,
            blocks: vec![MeasurableSet::full(space)],
            singleton_tail: None,
        }
    }

    /// The all-singletons partition, maximum of the refinement order.
    pub fn finest(space: GroundSpace) -> Self {
        match space {
            GroundSpace::Finite(n) => Partition {
                space,
                blocks: (0..n as u64)
                    .map(|s| MeasurableSet::finite_from_members(n, &[s]).unwrap())
                    .collect(),
                singleton_tail: None,
            },
            GroundSpace::CountableNat => Partition {
                space,
                blocks: vec![],
                singleton_tail: Some(MeasurableSet::full(space)),
            },
        }
    }

    pub fn space(&self) -> GroundSpace {
        self.space
    }

    pub fn blocks(&self) -> &[MeasurableSet] {
        &self.blocks
    }

    pub fn singleton_tail(&self) -> Option<&MeasurableSet> {
        self.singleton_tail.as_ref()
    }

    /// Number of explicit blocks (the singleton tail counts as one entry
    /// for reporting purposes).
    pub fn block_count(&self) -> usize {
        self.blocks.len() + usize::from(self.singleton_tail.is_some())
    }

    pub fn is_finite_partition(&self) -> bool {
        match &self.singleton_tail {
            None => true,
            Some(r) => !r.cardinality().is_infinite(),
        }
    }

    /// True iff every block of `self` is included in some block of
    /// `coarser` (singleton blocks are always included in whatever block
    /// covers their point).
    pub fn is_finer_than(&self, coarser: &Partition) -> Result<bool> {
        if self.space != coarser.space {
            return Err(Error::SpaceMismatch);
        }
        'blocks: for b in &self.blocks {
            for c in &coarser.blocks {
                if b.is_subset_of(c)? {
                    continue 'blocks;
                }
            }
            if let Some(region) = &coarser.singleton_tail {
                if let crate::ground::SetCardinality::Finite(1) = b.cardinality() {
                    let point = b.min_element().unwrap();
                    if region.contains(point) {
                        continue 'blocks;
                    }
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// All nonempty pairwise intersections; finer than both inputs.
    pub fn common_refinement(&self, other: &Partition) -> Result<Partition> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let i = a.intersection(b)?;
                if !i.is_empty() {
                    blocks.push(i);
                }
            }
        }
        // points in either singleton region stay singletons in the
        // refinement; explicit blocks are disjoint from both regions
        let mut region = MeasurableSet::empty(self.space);
        if let Some(r) = &self.singleton_tail {
            region = region.union(r)?;
        }
        if let Some(r) = &other.singleton_tail {
            region = region.union(r)?;
        }
        if region.is_empty() {
            Partition::new(self.space, blocks)
        } else {
            let blocks = blocks
                .into_iter()
                .map(|b| b.difference(&region))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|b| !b.is_empty())
                .collect();
            Partition::with_singleton_tail(self.space, blocks)
        }
    }

    /// Tags every explicit block by its smallest element.
    pub fn tag_by_min(&self) -> TaggedPartition {
        let tags = self.blocks.iter().map(|b| b.min_element().unwrap()).collect();
        TaggedPartition { partition: self.clone(), tags }
    }
}

/// A partition with one tag point per explicit block; singleton-tail
/// blocks are tagged by their unique member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaggedPartition {
    partition: Partition,
    tags: Vec<u64>,
}

impl TaggedPartition {
    pub fn new(partition: Partition, tags: Vec<u64>) -> Result<Self> {
        if tags.len() != partition.blocks.len() {
            return Err(Error::Invalid(format!(
                "expected {} tags, got {}",
                partition.blocks.len(),
                tags.len()
            )));
        }
        for (b, t) in partition.blocks.iter().zip(&tags) {
            if !b.contains(*t) {
                return Err(Error::Invalid(format!("tag {t} is not a member of its block {b}")));
            }
        }
        Ok(TaggedPartition { partition, tags })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn tags(&self) -> &[u64] {
        &self.tags
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineStrategy {
    /// Peel off singletons from the front.
    SingletonFirst,
    /// Halve every splittable block (residue classes mod 2^k on the
    /// naturals).
    BinarySplit,
    /// All partitions of a small finite space, coarser before finer.
    Exhaustive,
}

/// A budget-bounded run of partitions. For the singleton and binary
/// strategies the result is a chain, each entry finer than the last; the
/// exhaustive strategy lists all partitions in a refinement-compatible
/// order (ascending block count).
pub fn refine_stream(
    space: GroundSpace,
    strategy: RefineStrategy,
    budget: usize,
) -> Result<Vec<Partition>> {
    if budget == 0 {
        return Err(Error::Invalid("refinement budget must be at least 1".into()));
    }
    match (strategy, space) {
        (RefineStrategy::SingletonFirst, GroundSpace::Finite(n)) => {
            let mut chain = vec![Partition::coarsest(space)];
            for k in 1..n as u64 {
                if chain.len() >= budget {
                    break;
                }
                let mut blocks: Vec<MeasurableSet> = (0..k)
                    .map(|s| MeasurableSet::finite_from_members(n, &[s]).unwrap())
                    .collect();
                blocks.push(MeasurableSet::finite_from_members(
                    n,
                    &(k..n as u64).collect::<Vec<_>>(),
                )?);
                chain.push(Partition::new(space, blocks)?);
            }
            Ok(chain)
        }
        (RefineStrategy::SingletonFirst, GroundSpace::CountableNat) => {
            let mut chain = vec![Partition::coarsest(space)];
            for k in 1..budget as u64 {
                let mut blocks: Vec<MeasurableSet> =
                    (0..k).map(|s| MeasurableSet::nat(EpSet::singleton(s))).collect();
                blocks.push(MeasurableSet::nat(EpSet::tail(k)));
                chain.push(Partition::new(space, blocks)?);
            }
            Ok(chain)
        }
        (RefineStrategy::BinarySplit, GroundSpace::Finite(n)) => {
            let mut chain = Vec::new();
            let mut spans: Vec<(u64, u64)> = vec![(0, n as u64)]; // half-open
            loop {
                let blocks = spans
                    .iter()
                    .map(|&(a, b)| {
                        MeasurableSet::finite_from_members(n, &(a..b).collect::<Vec<_>>())
                    })
                    .collect::<Result<Vec<_>>>()?;
                chain.push(Partition::new(space, blocks)?);
                if chain.len() >= budget || spans.iter().all(|&(a, b)| b - a <= 1) {
                    break;
                }
                spans = spans
                    .into_iter()
                    .flat_map(|(a, b)| {
                        if b - a <= 1 {
                            vec![(a, b)]
                        } else {
                            let mid = a + (b - a).div_ceil(2);
                            vec![(a, mid), (mid, b)]
                        }
                    })
                    .collect();
            }
            Ok(chain)
        }
        (RefineStrategy::BinarySplit, GroundSpace::CountableNat) => {
            let mut chain = Vec::new();
            let mut modulus = 1u64;
            for _ in 0..budget {
                let blocks = (0..modulus)
                    .map(|r| Ok(MeasurableSet::nat(EpSet::progression(r, modulus)?)))
                    .collect::<Result<Vec<_>>>()?;
                chain.push(Partition::new(space, blocks)?);
                if modulus > 1 << 12 {
                    break;
                }
                modulus *= 2;
            }
            Ok(chain)
        }
        (RefineStrategy::Exhaustive, GroundSpace::Finite(n)) => {
            if n > 5 {
                return Err(Error::Unsupported(format!(
                    "exhaustive enumeration is limited to 5 points, space has {n}"
                )));
            }
            let mut all = enumerate_partitions(n)?;
            all.sort_by_key(|p| p.blocks.len());
            all.truncate(budget);
            Ok(all)
        }
        (RefineStrategy::Exhaustive, GroundSpace::CountableNat) => Err(Error::Unsupported(
            "exhaustive enumeration requires a finite space".into(),
        )),
    }
}

/// All set partitions of {0, .., n-1} via restricted growth strings.
pub fn enumerate_partitions(n: u32) -> Result<Vec<Partition>> {
    if n == 0 || n > 12 {
        return Err(Error::Invalid(format!("partition enumeration supports 1..=12 points, got {n}")));
    }
    let space = GroundSpace::finite(n)?;
    let mut out = Vec::new();
    let mut rgs = vec![0u32; n as usize];
    loop {
        let block_count = rgs.iter().copied().max().unwrap() + 1;
        let mut masks = vec![0u64; block_count as usize];
        for (i, &g) in rgs.iter().enumerate() {
            masks[g as usize] |= 1 << i;
        }
        let blocks = masks
            .into_iter()
            .map(|m| MeasurableSet::finite_from_mask(n, m))
            .collect::<Result<Vec<_>>>()?;
        out.push(Partition::new(space, blocks)?);

        // next restricted growth string
        let mut i = n as usize - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            let cap = rgs[..i].iter().copied().max().unwrap() + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for g in rgs.iter_mut().skip(i + 1) {
                    *g = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}
