//! Azygetic families and Aronhold sets.

use std::path::Path;
use std::sync::OnceLock;

use super::bits::same_genus;
use super::form::QuadForm;
use crate::error::{Error, Result};

/// True iff the vectors `q_1 + q_k` (k ≥ 2) pair to 1 with each other.
pub fn is_azygetic(forms: &[QuadForm]) -> Result<bool> {
    if forms.len() < 3 {
        return Err(Error::WrongCount {
            expected: 3,
            got: forms.len(),
        });
    }
    let first = forms[0];
    for q in &forms[1..] {
        same_genus(first.genus(), q.genus())?;
    }
    let diffs: Vec<_> = forms[1..].iter().map(|q| first.diff_unchecked(q)).collect();
    for (i, u) in diffs.iter().enumerate() {
        for v in &diffs[i + 1..] {
            if u.pairing_unchecked(v) != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `1` when `g ≡ 2, 3 (mod 4)`, else `0`.
pub(crate) fn arf_correction(g: usize) -> u8 {
    u8::from(g % 4 >= 2)
}

/// Checks the defining property on every odd-weight combination of the `2g + 1` forms:
/// the combinations are pairwise distinct (so they exhaust all `4^g` forms) and each has
/// Arf invariant `(#q - 1)/2`, plus one when `g ≡ 2, 3 (mod 4)`.
pub fn is_aronhold(forms: &[QuadForm]) -> Result<bool> {
    let first = forms.first().ok_or(Error::WrongCount {
        expected: 3,
        got: 0,
    })?;
    let g = first.genus();
    if forms.len() != 2 * g + 1 {
        return Err(Error::WrongCount {
            expected: 2 * g + 1,
            got: forms.len(),
        });
    }
    for q in forms {
        same_genus(g, q.genus())?;
    }
    if g > 8 {
        return Err(Error::UnsupportedGenus {
            genus: g,
            reason: "the Aronhold check enumerates 4^g combinations",
        });
    }
    let corr = arf_correction(g);
    let n = forms.len();
    let mut seen = vec![false; 1 << (2 * g)];
    // Gray-code walk over all subsets keeps a running (eps, eps') sum.
    let (mut eps, mut eps_p) = (0u32, 0u32);
    for k in 1u32..1 << n {
        let bit = k.trailing_zeros() as usize;
        eps ^= forms[bit].eps();
        eps_p ^= forms[bit].eps_prime();
        let subset = k ^ (k >> 1);
        let weight = subset.count_ones();
        if weight % 2 == 0 {
            continue;
        }
        let q = QuadForm::new_unchecked(g, eps, eps_p);
        let expected = (((weight - 1) / 2) as u8 + corr) & 1;
        if q.arf() != expected {
            return Ok(false);
        }
        let idx = q.index();
        if seen[idx] {
            return Ok(false);
        }
        seen[idx] = true;
    }
    Ok(true)
}

/// An ordered Aronhold set `(q_1, …, q_{2g+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AronholdBasis {
    forms: Vec<QuadForm>,
}

impl AronholdBasis {
    pub fn new(forms: Vec<QuadForm>) -> Result<Self> {
        if !is_aronhold(&forms)? {
            return Err(Error::NotAronhold);
        }
        Ok(Self { forms })
    }

    pub fn genus(&self) -> usize {
        self.forms[0].genus()
    }

    pub fn forms(&self) -> &[QuadForm] {
        &self.forms
    }

    pub fn into_forms(self) -> Vec<QuadForm> {
        self.forms
    }

    /// `q_S`, the sum of all members.
    pub fn sum(&self) -> QuadForm {
        QuadForm::sum_odd(&self.forms).expect("2g+1 forms of one genus")
    }

    /// `q_i`, 1-based.
    pub fn q(&self, i: usize) -> QuadForm {
        self.forms[i - 1]
    }

    /// `q_{ij} = q_S + q_i + q_j`.
    pub fn q_pair(&self, i: usize, j: usize) -> QuadForm {
        QuadForm::sum3_unchecked(&self.sum(), &self.q(i), &self.q(j))
    }

    /// `q_{ijk} = q_i + q_j + q_k`.
    pub fn q_triple(&self, i: usize, j: usize, k: usize) -> QuadForm {
        QuadForm::sum3_unchecked(&self.q(i), &self.q(j), &self.q(k))
    }

    /// Reorders the basis so that `q_1 + q_2 + q_3 = q_t`, keeping the relative order of
    /// the chosen triple and of the remaining forms. `None` when no triple sums to `q_t`.
    pub fn ordered_for(&self, q_t: &QuadForm) -> Option<Self> {
        let n = self.forms.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s =
                        QuadForm::sum3_unchecked(&self.forms[i], &self.forms[j], &self.forms[k]);
                    if s == *q_t {
                        let mut forms = vec![self.forms[i], self.forms[j], self.forms[k]];
                        forms.extend(
                            (0..n)
                                .filter(|&m| m != i && m != j && m != k)
                                .map(|m| self.forms[m]),
                        );
                        return Some(Self { forms });
                    }
                }
            }
        }
        None
    }
}

/// For a genus-3 basis with `q_1 + q_2 + q_3 = q_T`, the basis
/// `(q_23, q_13, q_12, q_4, …, q_7)` whose sum is `q_T` and whose first three sum to `q_S`.
pub fn aronhold_conjugate(s: &AronholdBasis) -> Result<AronholdBasis> {
    if s.genus() != 3 {
        return Err(Error::UnsupportedGenus {
            genus: s.genus(),
            reason: "the conjugate basis is defined for genus 3",
        });
    }
    let q_t = s.q_triple(1, 2, 3);
    if !q_t.is_even() || q_t == s.sum() {
        return Err(Error::Precondition(
            "q1 + q2 + q3 must be even and differ from q_S".into(),
        ));
    }
    let mut forms = vec![s.q_pair(2, 3), s.q_pair(1, 3), s.q_pair(1, 2)];
    forms.extend_from_slice(&s.forms()[3..]);
    let out = AronholdBasis::new(forms).map_err(|_| {
        Error::Internal("conjugate of an Aronhold basis failed the Aronhold check".into())
    })?;
    debug_assert_eq!(out.sum(), q_t);
    Ok(out)
}

/// All Aronhold sets of genus `g ≤ 3`, each sorted by form index, the list sorted.
///
/// Depth-first search over `(2g+1)`-subsets of the forms with the right parity; a branch
/// is cut as soon as a triple of chosen forms sums to a form of the wrong parity.
pub fn enumerate_aronhold_sets(g: usize) -> Result<Vec<AronholdBasis>> {
    if !(1..=3).contains(&g) {
        return Err(Error::UnsupportedGenus {
            genus: g,
            reason: "exhaustive Aronhold enumeration is limited to g <= 3",
        });
    }
    let corr = arf_correction(g);
    let candidates: Vec<QuadForm> = QuadForm::all(g).filter(|q| q.arf() == corr).collect();
    let triple_parity = (1 + corr) & 1;
    let size = 2 * g + 1;
    let mut out = Vec::new();
    let mut chosen: Vec<QuadForm> = Vec::with_capacity(size);

    fn search(
        start: usize,
        size: usize,
        triple_parity: u8,
        candidates: &[QuadForm],
        chosen: &mut Vec<QuadForm>,
        out: &mut Vec<AronholdBasis>,
    ) {
        if chosen.len() == size {
            if is_aronhold(chosen).unwrap_or(false) {
                out.push(AronholdBasis {
                    forms: chosen.clone(),
                });
            }
            return;
        }
        let remaining = size - chosen.len();
        for idx in start..=candidates.len().saturating_sub(remaining) {
            let c = candidates[idx];
            let ok = chosen.iter().enumerate().all(|(i, x)| {
                chosen[i + 1..]
                    .iter()
                    .all(|y| QuadForm::sum3_unchecked(x, y, &c).arf() == triple_parity)
            });
            if ok {
                chosen.push(c);
                search(idx + 1, size, triple_parity, candidates, chosen, out);
                chosen.pop();
            }
        }
    }

    search(0, size, triple_parity, &candidates, &mut chosen, &mut out);
    out.sort_by(|a, b| a.forms.cmp(&b.forms));
    Ok(out)
}

/// The 288 genus-3 Aronhold sets, enumerated once per process.
pub fn aronhold_sets_g3() -> &'static [AronholdBasis] {
    static SETS: OnceLock<Vec<AronholdBasis>> = OnceLock::new();
    SETS.get_or_init(|| enumerate_aronhold_sets(3).expect("genus 3 is supported"))
}

/// Writes the sets as a JSON list of characteristic-string arrays.
pub fn save_aronhold_cache(path: &Path, sets: &[AronholdBasis]) -> Result<()> {
    let raw: Vec<&[QuadForm]> = sets.iter().map(|s| s.forms()).collect();
    let json = serde_json::to_string_pretty(&raw)?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

/// Reads a cache file, re-checking every entry.
pub fn load_aronhold_cache(path: &Path) -> Result<Vec<AronholdBasis>> {
    let text = std::fs::read_to_string(path)?;
    let raw: Vec<Vec<QuadForm>> = serde_json::from_str(&text)?;
    raw.into_iter().map(AronholdBasis::new).collect()
}

/// Loads the cache at `path`, or enumerates genus 3 and writes it.
pub fn load_or_enumerate(path: &Path) -> Result<Vec<AronholdBasis>> {
    if path.exists() {
        return load_aronhold_cache(path);
    }
    let sets = enumerate_aronhold_sets(3)?;
    save_aronhold_cache(path, &sets)?;
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::n0;

    fn sp_order(g: u32) -> u64 {
        (1..=g).fold(1u64 << (g * g), |acc, i| acc * ((1u64 << (2 * i)) - 1))
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn counts_match_group_order_over_orderings() {
        for g in 1..=3usize {
            let sets = enumerate_aronhold_sets(g).unwrap();
            let expected = sp_order(g as u32) / factorial(2 * g as u64 + 1);
            assert_eq!(sets.len() as u64, expected, "genus {g}");
        }
        assert_eq!(aronhold_sets_g3().len(), 288);
    }

    #[test]
    fn eight_sets_per_even_form() {
        let mut per_sum = std::collections::HashMap::new();
        for s in aronhold_sets_g3() {
            assert!(s.sum().is_even());
            *per_sum.entry(s.sum()).or_insert(0) += 1;
        }
        assert_eq!(per_sum.len(), 36);
        assert!(per_sum.values().all(|&c| c == 8));
    }

    #[test]
    fn aronhold_sets_are_azygetic() {
        for s in aronhold_sets_g3() {
            assert!(is_azygetic(s.forms()).unwrap());
        }
    }

    #[test]
    fn azygetic_edge_cases() {
        let n = n0();
        assert!(is_azygetic(n.forms()).unwrap());
        let mut dup = n.forms().to_vec();
        dup[3] = dup[0];
        assert!(!is_azygetic(&dup).unwrap());
        assert!(matches!(
            is_azygetic(&n.forms()[..2]),
            Err(Error::WrongCount { .. })
        ));
    }

    #[test]
    fn aronhold_rejects_duplicates_and_bad_counts() {
        let s = &aronhold_sets_g3()[0];
        let mut forms = s.forms().to_vec();
        forms[1] = forms[0];
        assert!(!is_aronhold(&forms).unwrap());
        assert!(matches!(
            is_aronhold(&s.forms()[..6]),
            Err(Error::WrongCount { .. })
        ));
        assert!(AronholdBasis::new(forms).is_err());
    }

    #[test]
    fn conjugate_is_involutive_with_swapped_sums() {
        for s in aronhold_sets_g3().iter().step_by(7) {
            for q_t in QuadForm::all_even(3).filter(|q| *q != s.sum()) {
                let ordered = s
                    .ordered_for(&q_t)
                    .expect("every other even form is a q_ijk");
                let c = aronhold_conjugate(&ordered).unwrap();
                assert_eq!(c.sum(), q_t);
                assert_eq!(c.q_triple(1, 2, 3), s.sum());
                assert_eq!(aronhold_conjugate(&c).unwrap(), ordered);
            }
        }
    }

    #[test]
    fn odd_forms_are_singles_and_pairs() {
        let s = &aronhold_sets_g3()[5];
        let mut odd: Vec<QuadForm> = (1..=7).map(|i| s.q(i)).collect();
        for i in 1..=7 {
            for j in i + 1..=7 {
                odd.push(s.q_pair(i, j));
            }
        }
        odd.sort();
        odd.dedup();
        assert_eq!(odd.len(), 28);
        assert!(odd.iter().all(|q| q.is_odd()));
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("aronhold.json");
        let sets = load_or_enumerate(&path).unwrap();
        assert!(path.exists());
        let again = load_or_enumerate(&path).unwrap();
        assert_eq!(sets, again);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.trim_start().starts_with('[') && text.contains("; "));
    }
}
