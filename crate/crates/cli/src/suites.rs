//! The verification suites run by `yw verify`.

use std::rc::Rc;
use yw_core::invariants::Invariants;
use yw_core::relations::{
    audit_degrees, check_construction, check_invariance, check_traninv, check_truncation, pbw_generators,
};
use yw_core::transforms::{
    check_aftermu, check_coassociativity, check_howithappens, check_miura_iterate, check_rectangle,
    miura_rank_probe, BabyData,
};
use yw_core::{
    Algebra, CheckReport, Claim, GeneratorTable, Kind, PathSums, Pyramid, Relations, Shape, Status, YwError,
};

use crate::config::{corruption_brick, CliError, Corruption};

/// Every suite, in the order `--all` runs them.
pub const ALL: &[&str] =
    &["relations", "parabolic", "truncation", "invariance", "pbw-audit", "traninv", "construction", "miura", "comult", "rect"];

/// Everything a suite needs; tables are built lazily from (possibly
/// corrupted) path sums.
pub struct Context {
    /// The pyramid.
    pub pyr: Pyramid,
    /// Selected shape.
    pub nu: Shape,
    /// Truncation order.
    pub k: usize,
    /// Maximal degree for the PBW audit and the Miura rank probe.
    pub d_max: usize,
    /// Seed of the randomised rectangle identities.
    pub seed: u64,
    /// Optional negative control.
    pub corrupt: Option<Corruption>,
    inv: Invariants,
}

impl Context {
    /// Builds the path sums (applying the corruption, if any).
    pub fn new(pyr: Pyramid, nu: Shape, k: usize, d_max: usize, seed: u64, corrupt: Option<Corruption>) -> Result<Context, CliError> {
        let sigma = pyr.shift_matrix()?;
        let mut sums = PathSums::new(pyr.clone(), k);
        if let Some(c) = corrupt {
            c.validate(&nu, &sigma, k)?;
            let (i, j, x, r) = c.path_entry(&nu);
            let b = corruption_brick(&pyr);
            let delta = sums.algebra().e(b, b);
            sums = sums.perturbed(i, j, x, r, delta)?;
        }
        let inv = Invariants::from_sums(sums)?;
        Ok(Context { pyr, nu, k, d_max, seed, corrupt, inv })
    }

    fn alg(&self) -> &Algebra {
        self.inv.algebra()
    }

    fn table(&self, nu: &Shape) -> Result<GeneratorTable, YwError> {
        self.inv.generators_direct(nu)
    }

    /// Runs one suite by name.
    pub fn run(&self, name: &str) -> Result<CheckReport, CliError> {
        let ones = Shape::ones(self.pyr.n());
        Ok(match name {
            "relations" => Relations::new(self.alg(), &self.table(&ones)?, None)?.defining()?,
            "parabolic" => Relations::new(self.alg(), &self.table(&self.nu)?, None)?.parabolic()?,
            "truncation" => check_truncation(self.alg(), &self.table(&self.nu)?, self.pyr.p()[0]),
            "invariance" => check_invariance(self.alg(), &self.table(&self.nu)?)?,
            "pbw-audit" => self.pbw_audit()?,
            "traninv" => check_traninv(self.inv.sums())?,
            "construction" => check_construction(&self.inv, &self.nu)?,
            "miura" => self.miura()?,
            "comult" => self.comult()?,
            "rect" => check_rectangle(self.inv.sums(), 100, self.seed)?,
            other => return Err(CliError::Usage(format!("unknown suite {other:?}; expected one of {}", ALL.join(", ")))),
        })
    }

    /// Suites applicable to this pyramid (the rectangle suite needs a
    /// rectangle).
    pub fn applicable(&self, name: &str) -> bool {
        name != "rect" || (self.pyr.is_rectangle() && self.k >= self.pyr.l())
    }

    fn pbw_audit(&self) -> Result<CheckReport, CliError> {
        let sigma = self.inv.sigma();
        let p = self.pyr.p();
        let mut lhs = pbw_generators(sigma, p, &self.nu);
        if let Some(c) = self.corrupt {
            let k = c.key;
            let before = lhs.len();
            lhs.retain(|g| !(g.kind == k.kind && g.a == k.a && g.i == k.i && g.j == k.j && g.r == k.r && g.b <= k.a + 1));
            if lhs.len() == before {
                return Err(CliError::Usage(format!("--corrupt target {} is not in the PBW generating set", c.label())));
            }
        }
        let lhs: Vec<usize> = lhs.iter().map(|g| g.r).collect();
        let rhs: Vec<usize> = sigma.centralizer_index_set(p).iter().map(|x| x.2).collect();
        Ok(audit_degrees(&lhs, &rhs, self.d_max))
    }

    fn miura(&self) -> Result<CheckReport, CliError> {
        let tab = self.table(&self.nu)?;
        let mut rep = miura_rank_probe(&self.pyr, self.alg(), &tab, self.d_max.min(self.k))?;
        rep.merge(check_miura_iterate(&self.pyr, self.alg(), &tab)?);
        rep.merge(check_aftermu(self.inv.sums())?);
        rep.finish();
        Ok(rep)
    }

    fn comult(&self) -> Result<CheckReport, CliError> {
        let mut rep = CheckReport::new();
        if self.pyr.l() < 2 {
            rep.push(vacuous("comult", "a single column has no splittings"));
            rep.finish();
            return Ok(rep);
        }
        rep.merge(check_howithappens(self.inv.sums())?);
        if self.pyr.l() >= 3 {
            rep.merge(check_coassociativity(&self.pyr, self.alg(), &self.table(&Shape::ones(self.pyr.n()))?)?);
        }
        for right in [true, false] {
            rep.merge(self.baby(right)?);
        }
        rep.finish();
        Ok(rep)
    }

    /// One-column removal on the side `right`, at the minimal shape.
    fn baby(&self, right: bool) -> Result<CheckReport, CliError> {
        let side = if right { "phiR" } else { "phiL" };
        let l = self.pyr.l();
        let cols: Vec<usize> = if right { (1..l).collect() } else { (2..=l).collect() };
        let small = self.pyr.sub_pyramid(&cols)?;
        let nu = self.inv.sigma().minimal_shape();
        let alg = Rc::new(Algebra::for_pyramid(&self.pyr));
        let tab = self.table(&nu)?;
        let small_inv = match Invariants::new(small.clone(), self.k) {
            Ok(v) => v,
            Err(YwError::HeightAmbiguous { .. }) => {
                return Ok(CheckReport::from_claims(vec![vacuous(side, "the smaller pyramid has an empty row")]))
            }
            Err(e) => return Err(e.into()),
        };
        let small_tab = small_inv.generators_direct(&nu);
        let small_tab = match small_tab {
            Ok(t) => t,
            Err(YwError::NotAdmissible(_)) => {
                return Ok(CheckReport::from_claims(vec![vacuous(side, "the minimal shape is not admissible for the smaller pyramid")]))
            }
            Err(e) => return Err(e.into()),
        };
        let data = BabyData {
            pyr: &self.pyr,
            alg,
            table: &tab,
            small: &small,
            small_alg: small_inv.algebra(),
            small_table: &small_tab,
        };
        let first = if right { data.check_right() } else { data.check_left() };
        match first {
            Ok(mut rep) => {
                rep.merge(data.check_superbaby(right)?);
                rep.finish();
                Ok(rep)
            }
            Err(YwError::CaseNotApplicable(msg)) => Ok(CheckReport::from_claims(vec![vacuous(side, &msg)])),
            Err(e) => Err(e.into()),
        }
    }
}

fn vacuous(id: &str, note: &str) -> Claim {
    Claim { id: id.into(), idx: vec![], status: Status::PassVacuous, residue: None, witness: Some(note.into()) }
}

/// Table entries of kind `kind` (used by the text rendering).
pub fn count_kind(tab: &GeneratorTable, kind: Kind) -> usize {
    tab.entries().keys().filter(|k| k.kind == kind).count()
}
