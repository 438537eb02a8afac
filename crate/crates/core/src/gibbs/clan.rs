use std::collections::HashSet;
use std::io::Write;

use rayon::prelude::*;

use crate::error::Result;
use crate::gibbs::free_process::{Domain, FreeProcess, MAX_DIM};
use crate::gibbs::model::GibbsModel;
use crate::gibbs::perfect::DEFAULT_EVENT_BUDGET;
use crate::rng::RngSeed;

/// Largest `k` reported by [`clan_tail_probe`].
pub const DEFAULT_TAIL_DEPTH: usize = 12;

/// Ancestor clan of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClanStats {
    /// Number of clan members, the point itself included.
    pub clan_size: usize,
    /// Diameter of the union of interaction balls about the clan members.
    pub clan_diameter: f64,
    /// Longest chain of ancestry below the point.
    pub generations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailRow {
    pub k: usize,
    pub empirical_tail: f64,
    /// `lambda^k`.
    pub bound: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClanTail {
    pub lambda: f64,
    pub range: f64,
    pub clans: Vec<ClanStats>,
    pub rows: Vec<TailRow>,
}

impl ClanTail {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,empirical_tail,bound,std_error")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                row.k, row.empirical_tail, row.bound, row.std_error
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Ancestor clan of a point placed at the origin at time 0 in the
/// infinite-volume free process drawn from `seed`.
pub fn origin_clan(model: &GibbsModel, seed: RngSeed) -> Result<ClanStats> {
    let d = model.dim();
    let r = model.range();
    let mut fp = FreeProcess::new(d, model.tau(), r, Domain::unbounded(), seed, DEFAULT_EVENT_BUDGET);
    let origin = [0.0; MAX_DIM];
    let mut seen = HashSet::new();
    let mut frontier = Vec::new();
    let mut buf = Vec::new();
    fp.alive_near(&origin[..d], 0.0, r, None, &mut buf)?;
    for &j in &buf {
        if seen.insert(j) {
            frontier.push(j);
        }
    }
    let mut members: Vec<[f64; MAX_DIM]> = vec![origin];
    let mut generations = 0;
    while !frontier.is_empty() {
        generations += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            let ev = *fp.event(i);
            members.push(ev.location);
            fp.alive_near(&ev.location[..d], ev.birth_time, r, Some(i), &mut buf)?;
            for &j in &buf {
                if seen.insert(j) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut spread = 0.0f64;
    for (a, p) in members.iter().enumerate() {
        for q in &members[a + 1..] {
            let d2: f64 = (0..d).map(|k| (p[k] - q[k]).powi(2)).sum();
            spread = spread.max(d2.sqrt());
        }
    }
    Ok(ClanStats {
        clan_size: members.len(),
        clan_diameter: spread + 2.0 * r,
        generations,
    })
}

/// Empirical tail `k -> P(diameter > 2 k r)` of origin clans over
/// `replications` independent free processes, for `k = 1..=DEFAULT_TAIL_DEPTH`.
pub fn clan_tail_probe(model: &GibbsModel, replications: usize, seed: RngSeed) -> Result<ClanTail> {
    clan_tail_probe_to(model, replications, DEFAULT_TAIL_DEPTH, seed)
}

pub fn clan_tail_probe_to(
    model: &GibbsModel,
    replications: usize,
    max_k: usize,
    seed: RngSeed,
) -> Result<ClanTail> {
    let clans = (0..replications as u64)
        .into_par_iter()
        .map(|rep| origin_clan(model, seed.derive(&[rep])))
        .collect::<Result<Vec<_>>>()?;
    let r = model.range();
    let lambda = model.branching_mean();
    let n = clans.len().max(1) as f64;
    let rows = (1..=max_k)
        .map(|k| {
            let exceed = clans
                .iter()
                .filter(|c| c.clan_diameter > 2.0 * k as f64 * r)
                .count();
            let p = exceed as f64 / n;
            TailRow {
                k,
                empirical_tail: p,
                bound: lambda.powi(k as i32),
                std_error: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect();
    Ok(ClanTail {
        lambda,
        range: r,
        clans,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gibbs::model::{Interaction, PairPotential};

    fn model(tau: f64) -> GibbsModel {
        GibbsModel::new(
            Interaction::PairPotential(PairPotential::strauss(0.5, 0.4).unwrap()),
            tau,
            1.0,
            2,
        )
        .unwrap()
    }

    #[test]
    fn tail_below_geometric_bound() {
        // lambda = 0.5
        let tau = 0.5 / (std::f64::consts::PI * 0.16);
        let tail = clan_tail_probe(&model(tau), 4000, RngSeed::new(2, 0)).unwrap();
        assert!((tail.lambda - 0.5).abs() < 1e-12);
        for row in &tail.rows {
            assert!(row.empirical_tail <= row.bound + 3.0 * row.std_error, "{row:?}");
        }
        for w in tail.rows.windows(2) {
            assert!(w[1].empirical_tail <= w[0].empirical_tail);
        }
        assert!(tail
            .clans
            .iter()
            .all(|c| c.clan_size >= 1 && c.clan_diameter >= 0.8));
    }

    #[test]
    fn tiny_activity_gives_singletons() {
        let tail = clan_tail_probe(&model(1e-9), 200, RngSeed::new(2, 1)).unwrap();
        for c in &tail.clans {
            assert_eq!(c.clan_size, 1);
            assert_eq!(c.generations, 0);
            assert!((c.clan_diameter - 0.8).abs() < 1e-15);
        }
        assert!(tail.rows.iter().all(|r| r.empirical_tail == 0.0));
    }

    #[test]
    fn csv_header() {
        let tail = clan_tail_probe_to(&model(1.0), 10, 3, RngSeed::new(0, 0)).unwrap();
        let csv = tail.to_csv_string();
        assert!(csv.starts_with("k,empirical_tail,bound,std_error\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
