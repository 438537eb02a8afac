//! The free (non-interacting) spatial birth-death process with birth
//! intensity `tau` per unit volume and unit death rate, in its stationary
//! regime, generated lazily.
//!
//! Space is tiled by cubic cells and the past by epochs of death times:
//! epoch 0 holds the points alive at time 0 together with deaths in
//! `[-1, 0)`, epoch `e >= 1` holds deaths in `[-2^e, -2^(e-1))`. Each
//! `(cell, epoch)` block is drawn from its own stream, so the realisation
//! does not depend on the order in which blocks are visited.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::rng::RngSeed;
use crate::samplers::poisson_count;

pub const MAX_DIM: usize = 3;

/// Thinning state of a birth-death event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    Pending,
    Accepted,
    Rejected,
}

/// One point of the free process. Unused trailing coordinates are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthDeathEvent {
    pub location: [f64; MAX_DIM],
    pub birth_time: f64,
    pub lifetime: f64,
    /// Uniform draw used for the acceptance decision.
    pub mark: f64,
    pub acceptance: Acceptance,
}

impl BirthDeathEvent {
    pub fn death_time(&self) -> f64 {
        self.birth_time + self.lifetime
    }

    pub fn alive_at(&self, t: f64) -> bool {
        self.birth_time < t && t < self.death_time()
    }
}

/// Spatial restriction: a centred cube of half side `half`, dilated by `pad`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Domain {
    pub half: f64,
    pub pad: f64,
}

impl Domain {
    pub fn unbounded() -> Self {
        Self {
            half: 0.0,
            pad: f64::INFINITY,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        if self.pad.is_infinite() {
            return true;
        }
        let out2: f64 = p.iter().map(|&c| (c.abs() - self.half).max(0.0).powi(2)).sum();
        out2.sqrt() <= self.pad
    }
}

type Cell = [i64; MAX_DIM];

pub(crate) struct FreeProcess {
    dim: usize,
    tau: f64,
    side: f64,
    seed: RngSeed,
    domain: Domain,
    budget: u64,
    generated: u64,
    events: Vec<BirthDeathEvent>,
    blocks: HashMap<(Cell, u32), (usize, usize)>,
}

impl FreeProcess {
    /// `reach` is the largest query radius; cells are at least that wide.
    pub fn new(dim: usize, tau: f64, reach: f64, domain: Domain, seed: RngSeed, budget: u64) -> Self {
        // Aim for a few points per cell and epoch.
        let side = reach.max((4.0 / tau).powf(1.0 / dim as f64));
        Self {
            dim,
            tau,
            side,
            seed,
            domain,
            budget,
            generated: 0,
            events: Vec::new(),
            blocks: HashMap::new(),
        }
    }

    pub fn event(&self, i: usize) -> &BirthDeathEvent {
        &self.events[i]
    }

    pub fn event_mut(&mut self, i: usize) -> &mut BirthDeathEvent {
        &mut self.events[i]
    }

    pub fn location(&self, i: usize) -> &[f64] {
        &self.events[i].location[..self.dim]
    }

    pub fn generated(&self) -> u64 {
        self.generated
    }

    fn cell_of(&self, p: &[f64]) -> Cell {
        let mut c = [0i64; MAX_DIM];
        for (k, &x) in p.iter().enumerate() {
            c[k] = (x / self.side).floor() as i64;
        }
        c
    }

    fn block(&mut self, cell: Cell, epoch: u32) -> Result<(usize, usize)> {
        if let Some(&r) = self.blocks.get(&(cell, epoch)) {
            return Ok(r);
        }
        let tags = [cell[0] as u64, cell[1] as u64, cell[2] as u64, epoch as u64];
        let mut rng = self.seed.derive(&tags).rng();
        let volume = self.side.powi(self.dim as i32);
        let mean = self.tau * volume;
        let start = self.events.len();
        let push = |rng: &mut rand_chacha::ChaCha8Rng,
                    birth: f64,
                    lifetime: f64,
                    events: &mut Vec<BirthDeathEvent>| {
            let mut location = [0.0; MAX_DIM];
            for k in 0..self.dim {
                location[k] = (cell[k] as f64 + rng.random::<f64>()) * self.side;
            }
            let mark = rng.random::<f64>();
            let ev = BirthDeathEvent {
                location,
                birth_time: birth,
                lifetime,
                mark,
                acceptance: Acceptance::Pending,
            };
            if self.domain.contains(&location[..self.dim]) {
                events.push(ev);
            }
        };
        let mut drawn = 0usize;
        if epoch == 0 {
            // Alive at time 0: age and residual life are independent Exp(1).
            let alive = poisson_count(&mut rng, mean);
            for _ in 0..alive {
                let age: f64 = Exp1.sample(&mut rng);
                let residual: f64 = Exp1.sample(&mut rng);
                push(&mut rng, -age, age + residual, &mut self.events);
            }
            let dead = poisson_count(&mut rng, mean);
            for _ in 0..dead {
                let death = -rng.random::<f64>();
                let life: f64 = Exp1.sample(&mut rng);
                push(&mut rng, death - life, life, &mut self.events);
            }
            drawn += alive + dead;
        } else {
            let lo = (epoch as f64).exp2();
            let len = lo / 2.0;
            let count = poisson_count(&mut rng, mean * len);
            for _ in 0..count {
                let death = -lo + len * rng.random::<f64>();
                let life: f64 = Exp1.sample(&mut rng);
                push(&mut rng, death - life, life, &mut self.events);
            }
            drawn += count;
        }
        self.generated += drawn as u64;
        if self.generated > self.budget {
            return Err(Error::EventBudgetExceeded { budget: self.budget });
        }
        let range = (start, self.events.len());
        self.blocks.insert((cell, epoch), range);
        Ok(range)
    }

    /// Number of epochs holding every death later than `t`.
    fn epochs_after(t: f64) -> u32 {
        let mut e = 1u32;
        while -(((e - 1) as f64).exp2()) > t {
            e += 1;
        }
        e
    }

    /// Indices of events alive at time `t` within distance `radius` of `p`,
    /// excluding `skip`. `radius` must not exceed the construction reach.
    pub fn alive_near(
        &mut self,
        p: &[f64],
        t: f64,
        radius: f64,
        skip: Option<usize>,
        out: &mut Vec<usize>,
    ) -> Result<()> {
        out.clear();
        let centre = self.cell_of(p);
        let epochs = Self::epochs_after(t);
        let mut offsets = vec![[0i64; MAX_DIM]];
        for k in 0..self.dim {
            offsets = offsets
                .into_iter()
                .flat_map(|o| {
                    (-1..=1).map(move |dk| {
                        let mut n = o;
                        n[k] = dk;
                        n
                    })
                })
                .collect();
        }
        for off in offsets {
            let mut cell = centre;
            for k in 0..MAX_DIM {
                cell[k] += off[k];
            }
            for epoch in 0..epochs {
                let (a, b) = self.block(cell, epoch)?;
                for i in a..b {
                    if Some(i) == skip {
                        continue;
                    }
                    let ev = &self.events[i];
                    if !ev.alive_at(t) {
                        continue;
                    }
                    let d2: f64 = (0..self.dim).map(|k| (ev.location[k] - p[k]).powi(2)).sum();
                    if d2.sqrt() <= radius {
                        out.push(i);
                    }
                }
            }
        }
        Ok(())
    }

    /// Events alive at time 0 whose location satisfies `keep`, scanning the
    /// cells that meet the centred cube of half side `half`.
    pub fn alive_at_zero_in(&mut self, half: f64, keep: impl Fn(&[f64]) -> bool) -> Result<Vec<usize>> {
        let lo = (-half / self.side).floor() as i64;
        let hi = (half / self.side).floor() as i64;
        let mut cells = vec![[0i64; MAX_DIM]];
        for k in 0..self.dim {
            cells = cells
                .into_iter()
                .flat_map(|c| {
                    (lo..=hi).map(move |i| {
                        let mut n = c;
                        n[k] = i;
                        n
                    })
                })
                .collect();
        }
        let mut roots = Vec::new();
        for cell in cells {
            let (a, b) = self.block(cell, 0)?;
            for i in a..b {
                let ev = &self.events[i];
                if ev.alive_at(0.0) && keep(&ev.location[..self.dim]) {
                    roots.push(i);
                }
            }
        }
        Ok(roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epochs_cover_deaths() {
        assert_eq!(FreeProcess::epochs_after(0.0), 1);
        assert_eq!(FreeProcess::epochs_after(-0.5), 1);
        assert_eq!(FreeProcess::epochs_after(-1.0), 1);
        assert_eq!(FreeProcess::epochs_after(-1.5), 2);
        assert_eq!(FreeProcess::epochs_after(-3.0), 3);
    }

    #[test]
    fn stationary_alive_count() {
        // Alive population at any time is Poisson(tau * volume).
        let tau = 2.0;
        let mut total = [0usize; 3];
        let reps = 400;
        for rep in 0..reps {
            let mut fp = FreeProcess::new(2, tau, 1.0, Domain::unbounded(), RngSeed::new(5, rep), u64::MAX);
            let mut out = Vec::new();
            for (j, t) in [0.0, -0.7, -5.0].into_iter().enumerate() {
                fp.alive_near(&[0.0, 0.0], t, 1.0, None, &mut out).unwrap();
                total[j] += out.len();
            }
        }
        let expect = tau * std::f64::consts::PI;
        let se = (expect / reps as f64).sqrt();
        for t in total {
            let mean = t as f64 / reps as f64;
            assert!((mean - expect).abs() < 4.0 * se, "{mean} vs {expect}");
        }
    }

    #[test]
    fn order_independent() {
        let mk = || FreeProcess::new(2, 1.0, 0.5, Domain::unbounded(), RngSeed::new(1, 2), u64::MAX);
        let mut a = mk();
        let mut b = mk();
        let mut out = Vec::new();
        a.alive_near(&[10.0, 10.0], -2.0, 0.5, None, &mut out).unwrap();
        a.alive_near(&[0.0, 0.0], -2.0, 0.5, None, &mut out).unwrap();
        let ea: Vec<_> = out.iter().map(|&i| *a.event(i)).collect();
        b.alive_near(&[0.0, 0.0], -2.0, 0.5, None, &mut out).unwrap();
        let eb: Vec<_> = out.iter().map(|&i| *b.event(i)).collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn budget_enforced() {
        let mut fp = FreeProcess::new(2, 50.0, 1.0, Domain::unbounded(), RngSeed::new(1, 0), 10);
        let mut out = Vec::new();
        let err = fp.alive_near(&[0.0, 0.0], 0.0, 1.0, None, &mut out).unwrap_err();
        assert!(matches!(err, Error::EventBudgetExceeded { budget: 10 }));
    }
}
