//! Fundamental systems: construction from Aronhold bases, shifts, the eight systems of
//! Weber's formula, and the symplectic map between two systems.

use serde::{Deserialize, Serialize};

use super::aronhold::AronholdBasis;
use super::bits::{same_genus, BitMatrix};
use super::form::QuadForm;
use super::symplectic::SymplecticMapF2;
use crate::chars::aronhold::is_azygetic;
use crate::error::{Error, Result};

/// An azygetic family `(p_1, …, p_{2g+2})` with `p_1..p_g` odd and the rest even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<QuadForm>", into = "Vec<QuadForm>")]
pub struct FundamentalSystem {
    forms: Vec<QuadForm>,
}

pub fn is_fundamental(forms: &[QuadForm]) -> Result<bool> {
    let Some(first) = forms.first() else {
        return Ok(false);
    };
    let g = first.genus();
    if forms.len() != 2 * g + 2 {
        return Ok(false);
    }
    for q in forms {
        same_genus(g, q.genus())?;
    }
    let parity_ok =
        forms[..g].iter().all(QuadForm::is_odd) && forms[g..].iter().all(QuadForm::is_even);
    Ok(parity_ok && is_azygetic(forms)?)
}

impl FundamentalSystem {
    pub fn new(forms: Vec<QuadForm>) -> Result<Self> {
        if !is_fundamental(&forms)? {
            return Err(Error::NotFundamental);
        }
        Ok(Self { forms })
    }

    pub fn genus(&self) -> usize {
        self.forms[0].genus()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    /// `p_i`, 1-based.
    pub fn p(&self, i: usize) -> QuadForm {
        self.forms[i - 1]
    }

    pub fn last(&self) -> QuadForm {
        *self.forms.last().expect("nonempty")
    }

    /// The odd members `p_1..p_g`.
    pub fn odd_part(&self) -> &[QuadForm] {
        &self.forms[..self.genus()]
    }

    /// The even members `p_{g+1}..p_{2g+2}`.
    pub fn even_part(&self) -> &[QuadForm] {
        &self.forms[self.genus()..]
    }

    /// Applies `σ` member-wise; the image of a fundamental system is one.
    pub fn transform(&self, sigma: &SymplecticMapF2) -> Result<Self> {
        same_genus(self.genus(), sigma.genus())?;
        let forms = self
            .forms
            .iter()
            .map(|q| sigma.act_form_unchecked(q))
            .collect();
        Self::new(forms).map_err(|_| Error::Internal("image of a fundamental system".into()))
    }
}

impl TryFrom<Vec<QuadForm>> for FundamentalSystem {
    type Error = Error;

    fn try_from(forms: Vec<QuadForm>) -> Result<Self> {
        Self::new(forms)
    }
}

impl From<FundamentalSystem> for Vec<QuadForm> {
    fn from(p: FundamentalSystem) -> Self {
        p.forms
    }
}

fn form(eps: [u8; 3], eps_prime: [u8; 3]) -> QuadForm {
    QuadForm::from_bits(&eps, &eps_prime).expect("valid literal")
}

/// The reference genus-3 fundamental system `N₀`.
pub fn n0() -> FundamentalSystem {
    FundamentalSystem::new(vec![
        form([1, 0, 0], [1, 0, 0]),
        form([0, 1, 0], [1, 1, 0]),
        form([0, 0, 1], [1, 1, 1]),
        form([1, 0, 0], [0, 0, 0]),
        form([0, 1, 0], [1, 0, 0]),
        form([0, 0, 1], [1, 1, 0]),
        form([0, 0, 0], [1, 1, 1]),
        form([0, 0, 0], [0, 0, 0]),
    ])
    .expect("N0 is a fundamental system")
}

/// For `g ≡ 3 (mod 4)`: `(q_1, …, q_g, q_{g+1} + v, …, q_{2g+1} + v, q_S)` with
/// `v = q_{g+1} + … + q_{2g+1}`.
pub fn aronhold_to_fundamental(s: &AronholdBasis) -> Result<FundamentalSystem> {
    let g = s.genus();
    if g % 4 != 3 {
        return Err(Error::UnsupportedGenus {
            genus: g,
            reason: "the Aronhold construction of fundamental systems needs g = 3 mod 4",
        });
    }
    let tail = &s.forms()[g..];
    // v is a sum of g+1 (even count) forms, i.e. the vector tail[0] + (tail[1] + ... ).
    let rest = QuadForm::sum_odd(&tail[1..])?;
    let v = tail[0].diff_unchecked(&rest);
    let mut forms: Vec<QuadForm> = s.forms()[..g].to_vec();
    forms.extend(tail.iter().map(|q| q.add_vector_unchecked(&v)));
    forms.push(s.sum());
    FundamentalSystem::new(forms)
        .map_err(|_| Error::Internal("Aronhold basis produced a non-fundamental system".into()))
}

/// `v_i + P`: add `v_i = p_i + p_{2g+2}` to every member, then swap positions `i` and `2g+2`.
pub fn shift_system(p: &FundamentalSystem, i: usize) -> Result<FundamentalSystem> {
    let g = p.genus();
    if !(1..=g).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, max: g });
    }
    let v = p.p(i).diff_unchecked(&p.last());
    let mut forms: Vec<QuadForm> = p.forms.iter().map(|q| q.add_vector_unchecked(&v)).collect();
    let n = forms.len();
    forms.swap(i - 1, n - 1);
    FundamentalSystem::new(forms)
        .map_err(|_| Error::Internal("shift produced a non-fundamental system".into()))
}

/// The partner `P′ = (p_23, p_13, p_12, p_4, …, p_7, p_1 + p_2 + p_3)` of a genus-3 system,
/// where `p_ij = p_8 + p_i + p_j`.
pub fn partner_system(p: &FundamentalSystem) -> Result<FundamentalSystem> {
    if p.genus() != 3 {
        return Err(Error::UnsupportedGenus {
            genus: p.genus(),
            reason: "partner systems are defined for genus 3",
        });
    }
    let pij = |i: usize, j: usize| QuadForm::sum3_unchecked(&p.last(), &p.p(i), &p.p(j));
    let mut forms = vec![pij(2, 3), pij(1, 3), pij(1, 2)];
    forms.extend_from_slice(&p.forms[3..7]);
    forms.push(QuadForm::sum3_unchecked(&p.p(1), &p.p(2), &p.p(3)));
    FundamentalSystem::new(forms)
        .map_err(|_| Error::Internal("partner of a fundamental system".into()))
}

/// The eight systems `P_0..P_3` (numerator) and `P′_0..P′_3` (denominator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeberFamily {
    pub numerator: [FundamentalSystem; 4],
    pub denominator: [FundamentalSystem; 4],
}

impl WeberFamily {
    /// Builds the family from `P_0`: `P_i = v_i + P_0`, `P′_i = v_i + P′_0`.
    pub fn from_base(p0: &FundamentalSystem) -> Result<Self> {
        let p0_partner = partner_system(p0)?;
        let numerator = [
            p0.clone(),
            shift_system(p0, 1)?,
            shift_system(p0, 2)?,
            shift_system(p0, 3)?,
        ];
        let denominator = [
            p0_partner.clone(),
            shift_system(&p0_partner, 1)?,
            shift_system(&p0_partner, 2)?,
            shift_system(&p0_partner, 3)?,
        ];
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn base(&self) -> &FundamentalSystem {
        &self.numerator[0]
    }

    pub fn systems(&self) -> impl Iterator<Item = &FundamentalSystem> {
        self.numerator.iter().chain(self.denominator.iter())
    }
}

/// The eight systems attached to an Aronhold basis ordered so that `q_1 + q_2 + q_3 = q_T`.
pub fn weber_systems(s: &AronholdBasis, q_t: &QuadForm) -> Result<WeberFamily> {
    if s.genus() != 3 {
        return Err(Error::UnsupportedGenus {
            genus: s.genus(),
            reason: "Weber systems are defined for genus 3",
        });
    }
    if s.q_triple(1, 2, 3) != *q_t {
        return Err(Error::Precondition(
            "the basis must be ordered with q1 + q2 + q3 = q_T".into(),
        ));
    }
    WeberFamily::from_base(&aronhold_to_fundamental(s)?)
}

/// A symplectic `σ` with `σ·n_i = p_i` for every `i`.
///
/// The vectors `n_i + n_{2g+2}` and `p_i + p_{2g+2}` (`i ≤ 2g`) are azygetic bases with
/// identical Gram matrices, so the linear map between them is symplectic. It also sends
/// `n_{2g+2}` to `p_{2g+2}`: both `σ·n_{2g+2}` and `p_{2g+2}` take the value
/// `a(p_i) + a(p_{2g+2})` on the `i`-th basis vector.
pub fn find_sigma(n: &FundamentalSystem, p: &FundamentalSystem) -> Result<SymplecticMapF2> {
    same_genus(n.genus(), p.genus())?;
    let g = n.genus();
    let basis = |sys: &FundamentalSystem| -> Vec<u64> {
        let last = sys.last();
        sys.forms[..2 * g]
            .iter()
            .map(|q| q.diff_unchecked(&last).packed())
            .collect()
    };
    let x = BitMatrix::from_columns(&basis(n), 2 * g);
    let y = BitMatrix::from_columns(&basis(p), 2 * g);
    let x_inv = x
        .inverse()
        .ok_or_else(|| Error::Internal("azygetic family is not a basis".into()))?;
    let sigma = SymplecticMapF2::from_full(&y.mul(&x_inv))
        .map_err(|_| Error::Internal("map between azygetic bases is not symplectic".into()))?;
    if sigma.act_form_unchecked(&n.last()) != p.last() {
        return Err(Error::Internal("sigma does not map the last member".into()));
    }
    for (a, b) in n.forms.iter().zip(&p.forms) {
        if sigma.act_form_unchecked(a) != *b {
            return Err(Error::Internal("sigma does not map the system".into()));
        }
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::aronhold::aronhold_sets_g3;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> QuadForm {
        s.parse().unwrap()
    }

    #[test]
    fn n0_and_its_partner() {
        let n = n0();
        let partner = partner_system(&n).unwrap();
        let expected: Vec<QuadForm> = [
            "011/001", "101/011", "110/010", "100/000", "010/100", "001/110", "000/111", "111/101",
        ]
        .iter()
        .map(|s| q(s))
        .collect();
        assert_eq!(partner.forms(), &expected[..]);
    }

    #[test]
    fn aronhold_to_fundamental_for_all_sets() {
        for s in aronhold_sets_g3() {
            let p = aronhold_to_fundamental(s).unwrap();
            assert_eq!(p.last(), s.sum());
            assert!(p.odd_part().iter().all(QuadForm::is_odd));
            assert!(p.even_part().iter().all(QuadForm::is_even));
            assert_eq!(p.p(4), s.q_triple(5, 6, 7));
            assert_eq!(p.p(7), s.q_triple(4, 5, 6));
        }
    }

    #[test]
    fn aronhold_to_fundamental_genus_guard() {
        let s = &crate::chars::aronhold::enumerate_aronhold_sets(2).unwrap()[0];
        assert!(matches!(
            aronhold_to_fundamental(s),
            Err(Error::UnsupportedGenus { .. })
        ));
    }

    #[test]
    fn shift_examples() {
        let n = n0();
        for i in 1..=3 {
            let s = shift_system(&n, i).unwrap();
            assert_eq!(s.p(i), n.p(i));
            assert_eq!(s.last(), n.last());
            assert_eq!(shift_system(&s, i).unwrap(), n);
        }
        assert!(matches!(
            shift_system(&n, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(shift_system(&n, 0).is_err());
    }

    #[test]
    fn weber_systems_explicit_forms() {
        let s = &aronhold_sets_g3()[17];
        let q_t = QuadForm::all_even(3).find(|x| *x != s.sum()).unwrap();
        let s = s.ordered_for(&q_t).unwrap();
        let fam = weber_systems(&s, &q_t).unwrap();
        let p0 = fam.base();
        let pij = |i: usize, j: usize| QuadForm::sum3_unchecked(&p0.last(), &p0.p(i), &p0.p(j));
        // P_1 = (p1, p12, ..., p17, q_S)
        let p1: Vec<_> = std::iter::once(p0.p(1))
            .chain((2..=7).map(|j| pij(1, j)))
            .chain(std::iter::once(s.sum()))
            .collect();
        assert_eq!(fam.numerator[1].forms(), &p1[..]);
        // P'_3 = (p2, p1, p12, p34, ..., p37, q_T)
        let p3p: Vec<_> = [p0.p(2), p0.p(1), pij(1, 2)]
            .into_iter()
            .chain((4..=7).map(|j| pij(3, j)))
            .chain(std::iter::once(q_t))
            .collect();
        assert_eq!(fam.denominator[3].forms(), &p3p[..]);
        // P'_0 = (q23, q13, q12, q567, ..., q_T)
        let p0p = &fam.denominator[0];
        assert_eq!(p0p.p(1), s.q_pair(2, 3));
        assert_eq!(p0p.last(), q_t);
    }

    #[test]
    fn weber_systems_odd_slot_balance() {
        for s in aronhold_sets_g3().iter().step_by(11) {
            for q_t in QuadForm::all_even(3).filter(|x| *x != s.sum()).take(5) {
                let s = s.ordered_for(&q_t).unwrap();
                let fam = weber_systems(&s, &q_t).unwrap();
                let mut num: Vec<QuadForm> = fam
                    .numerator
                    .iter()
                    .flat_map(|p| p.odd_part().to_vec())
                    .collect();
                let mut den: Vec<QuadForm> = fam
                    .denominator
                    .iter()
                    .flat_map(|p| p.odd_part().to_vec())
                    .collect();
                num.sort();
                den.sort();
                assert_eq!(num, den);
                let mut six = vec![
                    s.q(1),
                    s.q(2),
                    s.q(3),
                    s.q_pair(1, 2),
                    s.q_pair(1, 3),
                    s.q_pair(2, 3),
                ];
                six.sort();
                for f in &six {
                    assert_eq!(num.iter().filter(|x| *x == f).count(), 2);
                }
                num.dedup();
                assert_eq!(num, six);
                // even slots 4..7 agree pairwise between P_i and P'_i
                for k in 0..4 {
                    assert_eq!(
                        fam.numerator[k].forms()[3..7],
                        fam.denominator[k].forms()[3..7]
                    );
                }
            }
        }
    }

    #[test]
    fn weber_systems_requires_ordering() {
        let s = &aronhold_sets_g3()[0];
        let q_t = QuadForm::all_even(3)
            .find(|x| *x != s.sum() && *x != s.q_triple(1, 2, 3))
            .unwrap();
        assert!(weber_systems(s, &q_t).is_err());
    }

    #[test]
    fn find_sigma_maps_n0_to_every_p0() {
        let n = n0();
        for s in aronhold_sets_g3() {
            let p = aronhold_to_fundamental(s).unwrap();
            let sigma = find_sigma(&n, &p).unwrap();
            assert_eq!(n.transform(&sigma).unwrap(), p);
        }
        assert!(find_sigma(&n, &n).is_ok());
    }

    #[test]
    fn azygetic_is_order_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = n0();
        let mut forms = n.forms().to_vec();
        for _ in 0..50 {
            forms.shuffle(&mut rng);
            assert!(is_azygetic(&forms).unwrap());
        }
        let mut broken = n.forms().to_vec();
        broken[7] = q("111/111");
        let verdict = is_azygetic(&broken).unwrap();
        for _ in 0..50 {
            broken.shuffle(&mut rng);
            assert_eq!(is_azygetic(&broken).unwrap(), verdict);
        }
    }

    #[test]
    fn serde_validates() {
        let n = n0();
        let json = serde_json::to_string(&n).unwrap();
        assert!(json.starts_with("[\"[1 0 0; 1 0 0]\""));
        let back: FundamentalSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, n);
        let bad = json.replace("[0 0 0; 0 0 0]", "[1 1 1; 1 1 1]");
        assert!(serde_json::from_str::<FundamentalSystem>(&bad).is_err());
    }
}
