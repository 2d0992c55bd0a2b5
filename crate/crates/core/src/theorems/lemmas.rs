//! The product map `F_q^* × H → F_{q^r}^*`, `(y, z) ↦ yz`, where
//! `H = ⟨η^N⟩`.

use serde::{Deserialize, Serialize};

use super::{QuadraticClass, TheoremError};
use crate::code::CodeParams;
use crate::field::{FieldElement, Subfield, Tower};
use crate::numtheory::gcd;

/// Membership table of `⟨g⟩`, generated by repeated multiplication.
fn subgroup_table(tower: &Tower, g: FieldElement) -> Vec<bool> {
    let mut member = vec![false; tower.order() as usize];
    let mut z = FieldElement::ONE;
    loop {
        member[z.index() as usize] = true;
        z = tower.mul(z, g);
        if z == FieldElement::ONE {
            return member;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub h_order: u64,
    pub kernel_size: u64,
    /// `2(q-1)/N`, or `None` when `N/2` does not divide `q - 1`.
    pub expected_kernel: Option<u64>,
    /// `|F_q^* ∩ H|`.
    pub intersection_size: u64,
    /// `F_q^* ∩ H` equals the subgroup of order `2(q-1)/N`.
    pub intersection_is_h0: bool,
    /// `gcd(q - 1, (q^r - 1)/N)`.
    pub gcd_value: u64,
    /// The image of the map is exactly the set of squares.
    pub image_is_squares: bool,
    pub pass: bool,
}

/// Computes the kernel, the intersection with `F_q^*` and the image by
/// enumeration.
pub fn verify_lemma41(params: &CodeParams) -> KernelReport {
    let t = params.tower();
    let q = t.q();
    let h = subgroup_table(t, params.eta_n());
    let h_order = h.iter().filter(|&&m| m).count() as u64;
    let fq_star: Vec<FieldElement> = t.subfield_elements(Subfield::Q).into_iter().skip(1).collect();

    let mut kernel_size = 0u64;
    let mut image = vec![false; t.order() as usize];
    let h_elems: Vec<FieldElement> = t.elements().filter(|z| h[z.index() as usize]).collect();
    for &y in &fq_star {
        for &z in &h_elems {
            let v = t.mul(y, z);
            if v == FieldElement::ONE {
                kernel_size += 1;
            }
            image[v.index() as usize] = true;
        }
    }
    let image_is_squares = t
        .elements()
        .skip(1)
        .all(|x| image[x.index() as usize] == t.is_square(x).expect("nonzero"));

    let two_qm1 = 2 * (q - 1);
    let expected_kernel = two_qm1.is_multiple_of(params.n_div()).then(|| two_qm1 / params.n_div());
    let in_both: Vec<FieldElement> = fq_star.iter().copied().filter(|y| h[y.index() as usize]).collect();
    let intersection_is_h0 = match expected_kernel {
        Some(k) => {
            let h0: Vec<FieldElement> = t
                .elements()
                .skip(1)
                .filter(|&x| t.pow(x, k) == FieldElement::ONE)
                .collect();
            let mut mine = in_both.clone();
            mine.sort_unstable_by_key(|x| x.index());
            mine == h0
        }
        None => false,
    };
    let gcd_value = gcd(q - 1, t.group_order() / params.n_div());
    let pass = Some(kernel_size) == expected_kernel
        && intersection_is_h0
        && Some(gcd_value) == expected_kernel
        && image_is_squares;
    KernelReport {
        h_order,
        kernel_size,
        expected_kernel,
        intersection_size: in_both.len() as u64,
        intersection_is_h0,
        gcd_value,
        image_is_squares,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetCheck {
    pub a: FieldElement,
    pub class: QuadraticClass,
    pub size: u64,
    pub multiplicity: u64,
    pub equal: bool,
    /// First position where the sorted multisets differ.
    pub first_difference: Option<usize>,
}

/// Compares `{a y z : y ∈ F_q^*, z ∈ H}` with `2(q-1)/N` copies of the
/// class of `a` (squares or non-squares).
pub fn verify_lemma42(params: &CodeParams, a: FieldElement) -> Result<MultisetCheck, TheoremError> {
    let t = params.tower();
    let class = QuadraticClass::of(t, a)?;
    let h = subgroup_table(t, params.eta_n());
    let fq_star: Vec<FieldElement> = t.subfield_elements(Subfield::Q).into_iter().skip(1).collect();
    let mut got: Vec<u32> = Vec::new();
    for z in t.elements().filter(|z| h[z.index() as usize]) {
        let az = t.mul(a, z);
        got.extend(fq_star.iter().map(|&y| t.mul(az, y).index()));
    }
    got.sort_unstable();

    let multiplicity = 2 * (t.q() - 1) / params.n_div();
    let want_square = class == QuadraticClass::Square;
    let mut want: Vec<u32> = Vec::with_capacity(got.len());
    for x in t.elements().skip(1) {
        if t.is_square(x).expect("nonzero") == want_square {
            want.extend(std::iter::repeat_n(x.index(), multiplicity as usize));
        }
    }
    let first_difference = got
        .iter()
        .zip(&want)
        .position(|(g, w)| g != w)
        .or_else(|| (got.len() != want.len()).then(|| got.len().min(want.len())));
    Ok(MultisetCheck {
        a,
        class,
        size: got.len() as u64,
        multiplicity,
        equal: first_difference.is_none(),
        first_difference,
    })
}
