//! Deterministic local wirings that merge the pair of a cut into a single
//! effective party, and the scan checking every wired box for locality.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::behavior::{Behavior, Scenario};
use crate::error::{Error, Result};
use crate::local::{local_lp, local_membership, require_no_signaling, LocalVerdict};
use crate::lp::{FarkasCertificate, LinearProgram};
use crate::rational::Rational;
use crate::tobl::Bipartition;

/// Which grouped box is queried first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    LeaderFirst,
    FollowerFirst,
}

/// What the composite party does on one of its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WiringBranch {
    pub order: Order,
    pub first_input: u8,
    /// Input to the second box, indexed by the first box's output.
    pub second_input: [u8; 2],
    /// Final bit, indexed by `2 * first_output + second_output`.
    pub output: [u8; 4],
}

impl WiringBranch {
    pub const COUNT: usize = 256;

    /// Bits, most significant first: order, first input, second-input
    /// table, output table.
    pub fn from_index(index: usize) -> Self {
        let bit = |k: usize| ((index >> k) & 1) as u8;
        WiringBranch {
            order: if bit(7) == 0 { Order::LeaderFirst } else { Order::FollowerFirst },
            first_input: bit(6),
            second_input: [bit(5), bit(4)],
            output: [bit(3), bit(2), bit(1), bit(0)],
        }
    }

    pub fn index(&self) -> usize {
        let mut idx = (self.order == Order::FollowerFirst) as usize;
        for &b in std::iter::once(&self.first_input).chain(&self.second_input).chain(&self.output) {
            idx = idx * 2 + b as usize;
        }
        idx
    }
}

/// One branch per composite input `w ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wiring {
    pub branches: [WiringBranch; 2],
}

impl Wiring {
    pub const COUNT: usize = WiringBranch::COUNT * WiringBranch::COUNT;

    pub fn from_index(index: usize) -> Self {
        Wiring {
            branches: [
                WiringBranch::from_index(index / WiringBranch::COUNT),
                WiringBranch::from_index(index % WiringBranch::COUNT),
            ],
        }
    }

    pub fn index(&self) -> usize {
        self.branches[0].index() * WiringBranch::COUNT + self.branches[1].index()
    }

    /// Query the leader with `w`, ignore the follower, output the leader's bit.
    pub fn leader_only() -> Self {
        let branch = |w: u8| WiringBranch {
            order: Order::LeaderFirst,
            first_input: w,
            second_input: [0, 0],
            output: [0, 0, 1, 1],
        };
        Wiring { branches: [branch(0), branch(1)] }
    }

    pub fn constant(bit: u8) -> Self {
        let branch = WiringBranch { order: Order::LeaderFirst, first_input: 0, second_input: [0, 0], output: [bit; 4] };
        Wiring { branches: [branch; 2] }
    }
}

impl fmt::Display for Wiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, b) in self.branches.iter().enumerate() {
            if w > 0 {
                f.write_str("; ")?;
            }
            let order = match b.order {
                Order::LeaderFirst => "leader",
                Order::FollowerFirst => "follower",
            };
            write!(
                f,
                "w={w}: {order} first with input {}, second input {:?}, output {:?}",
                b.first_input, b.second_input, b.output
            )?;
        }
        Ok(())
    }
}

/// All deterministic wirings, ordered by [`Wiring::index`].
pub fn enumerate_wirings() -> Vec<Wiring> {
    (0..Wiring::COUNT).map(Wiring::from_index).collect()
}

/// Behavior of the solo party (input `x`, output `a`) against the
/// composite party (input `w`, output `o`).
pub fn apply_wiring(behavior: &Behavior, bipartition: Bipartition, wiring: &Wiring) -> Result<Behavior> {
    if !behavior.scenario().is_tripartite_binary() {
        return Err(Error::ScenarioMismatch(format!(
            "wirings need three parties with two inputs and two outputs, got {}",
            behavior.scenario()
        )));
    }
    let canonical = behavior.permute(&bipartition.to_canonical())?;
    Ok(wire_canonical(&canonical, wiring))
}

fn wire_canonical(canonical: &Behavior, wiring: &Wiring) -> Behavior {
    let p = |a: usize, b: usize, c: usize, x: usize, y: usize, z: usize| {
        canonical.at((x << 2) | (y << 1) | z, (a << 2) | (b << 1) | c)
    };
    let mut table = vec![Rational::zero(); 16];
    for x in 0..2 {
        for (w, branch) in wiring.branches.iter().enumerate() {
            let row = (x << 1) | w;
            for a in 0..2 {
                for first_out in 0..2 {
                    let first_in = branch.first_input as usize;
                    let second_in = branch.second_input[first_out] as usize;
                    for second_out in 0..2 {
                        let value = match branch.order {
                            Order::LeaderFirst => p(a, first_out, second_out, x, first_in, second_in),
                            Order::FollowerFirst => p(a, second_out, first_out, x, second_in, first_in),
                        };
                        if value.is_zero() {
                            continue;
                        }
                        let o = branch.output[2 * first_out + second_out] as usize;
                        table[row * 4 + ((a << 1) | o)] += value;
                    }
                }
            }
        }
    }
    Behavior::new(Scenario::bipartite(), table).expect("16 cells")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    AllLocal,
    /// Lowest-index wiring whose output is nonlocal.
    Nonlocal {
        wiring: Wiring,
        wired: Behavior,
        certificate: FarkasCertificate,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub bipartition: Bipartition,
    pub wirings_checked: usize,
    pub distinct_behaviors: usize,
    pub verdict: ScanVerdict,
}

impl ScanReport {
    pub fn all_local(&self) -> bool {
        self.verdict == ScanVerdict::AllLocal
    }

    /// Program against which a nonlocal certificate verifies.
    pub fn certificate_program(&self) -> Option<LinearProgram> {
        match &self.verdict {
            ScanVerdict::AllLocal => None,
            ScanVerdict::Nonlocal { wired, .. } => Some(local_lp(wired)),
        }
    }
}

/// Applies every wiring on the cut and decides locality of each distinct
/// wired behavior.
pub fn wired_locality_scan(behavior: &Behavior, bipartition: Bipartition) -> Result<ScanReport> {
    scan_wirings(behavior, bipartition, &enumerate_wirings())
}

pub fn scan_wirings(behavior: &Behavior, bipartition: Bipartition, wirings: &[Wiring]) -> Result<ScanReport> {
    require_no_signaling(behavior)?;
    if !behavior.scenario().is_tripartite_binary() {
        return Err(Error::ScenarioMismatch("wirings need a (3,2,2) behavior".into()));
    }
    let canonical = behavior.permute(&bipartition.to_canonical())?;

    #[cfg(feature = "parallel")]
    let wired: Vec<Behavior> = {
        use rayon::prelude::*;
        wirings.par_iter().map(|w| wire_canonical(&canonical, w)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let wired: Vec<Behavior> = wirings.iter().map(|w| wire_canonical(&canonical, w)).collect();

    // distinct behavior -> first wiring position producing it
    let mut first_seen: HashMap<&Behavior, usize> = HashMap::new();
    let mut distinct: Vec<usize> = Vec::new();
    for (pos, b) in wired.iter().enumerate() {
        first_seen.entry(b).or_insert_with(|| {
            distinct.push(pos);
            pos
        });
    }
    for &pos in &distinct {
        let b = &wired[pos];
        if !b.is_valid() || !b.is_no_signaling() {
            return Err(Error::Internal(format!("wiring {} broke normalization or no-signaling", wirings[pos])));
        }
    }

    let decide = |pos: &usize| -> Result<(usize, LocalVerdict)> { Ok((*pos, local_membership(&wired[*pos])?)) };
    #[cfg(feature = "parallel")]
    let verdicts: Vec<Result<(usize, LocalVerdict)>> = {
        use rayon::prelude::*;
        distinct.par_iter().map(decide).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let verdicts: Vec<Result<(usize, LocalVerdict)>> = distinct.iter().map(decide).collect();

    let mut first_nonlocal: Option<(usize, FarkasCertificate)> = None;
    for verdict in verdicts {
        if let (pos, LocalVerdict::Nonlocal(cert)) = verdict? {
            if first_nonlocal.as_ref().is_none_or(|(best, _)| pos < *best) {
                first_nonlocal = Some((pos, cert));
            }
        }
    }
    let verdict = match first_nonlocal {
        None => ScanVerdict::AllLocal,
        Some((pos, certificate)) => {
            ScanVerdict::Nonlocal { wiring: wirings[pos], wired: wired[pos].clone(), certificate }
        }
    };
    Ok(ScanReport { bipartition, wirings_checked: wirings.len(), distinct_behaviors: distinct.len(), verdict })
}

/// Tripartite behavior with a PR box between A and B and C uniform and
/// independent: `a ⊕ b = x·y`.
pub fn pr_box_embedding() -> Behavior {
    let quarter = Rational::new(1.into(), 4.into());
    Behavior::from_fn(Scenario::tripartite(), |o, i| {
        if (o[0] ^ o[1]) == (i[0] & i[1]) {
            quarter.clone()
        } else {
            Rational::zero()
        }
    })
}

/// Bipartite PR box `a ⊕ b = x·y`.
pub fn pr_box() -> Behavior {
    let half = Rational::new(1.into(), 2.into());
    Behavior::from_fn(Scenario::bipartite(), |o, i| {
        if (o[0] ^ o[1]) == (i[0] & i[1]) {
            half.clone()
        } else {
            Rational::zero()
        }
    })
}
