//! Small worked values, each with an independent hand-derived oracle.

use std::sync::Arc;

use bsc_core::bimodule::{
    c_product, concat, element_from_tensor, graded_rank, in_lower_terms, localization_matrix, normal_element,
    parse_bits, standard_tensor,
};
use bsc_core::diagram::{check_relation, parse_diagram};
use bsc_core::morphism::{compose, dot_bot, dot_top, merge, split};
use bsc_core::poly::{average, decompose, demazure, half_root, rat, reflect};
use bsc_core::vertex::{alternating, jones_wenzl, solve_vertex};
use bsc_core::{BSElement, CartanData, Gallery, Morphism, Poly, StandardElement};

fn cartan(label: &str) -> Arc<CartanData> {
    Arc::new(CartanData::from_type(label).unwrap())
}

fn p(text: &str, rank: usize) -> Poly {
    Poly::parse(text, rank).unwrap()
}

fn bits(s: &str) -> u32 {
    parse_bits(s).unwrap().0
}

fn element(c: &Arc<CartanData>, seq: &[usize], coeffs: &[(&str, &str)]) -> BSElement {
    let map = coeffs.iter().map(|(b, f)| (bits(b), p(f, c.rank()))).collect();
    BSElement::from_coeffs(c.clone(), seq.to_vec(), map).unwrap()
}

fn basis(c: &Arc<CartanData>, seq: &[usize], b: &str) -> BSElement {
    BSElement::basis(c.clone(), seq.to_vec(), bits(b)).unwrap()
}

fn column(m: &Morphism, b: &str) -> BSElement {
    m.column(bits(b))
}

#[test]
fn braid_orders_match_reflection_matrix_orders() {
    for (label, m) in [("A1xA1", 2), ("A2", 3), ("B2", 4), ("G2", 6)] {
        let c = cartan(label);
        let st = c.reflection(0).unwrap().compose(&c.reflection(1).unwrap()).unwrap();
        assert_eq!(st.order(12), Some(m), "{label}");
        assert_eq!(c.m_order(0, 1).unwrap(), m);
    }
    let a2 = cartan("A2");
    assert_eq!(a2.weyl_from_word(&[0, 1, 0]).unwrap(), a2.weyl_from_word(&[1, 0, 1]).unwrap());
    assert_eq!(alternating(0, 1, 4), vec![0, 1, 0, 1]);
}

#[test]
fn demazure_values_in_a2() {
    let c = cartan("A2");
    let f = p("a1*a2", 2);
    assert_eq!(reflect(&c, 0, &p("a2", 2)).unwrap(), p("a1+a2", 2));
    assert_eq!(demazure(&c, 0, &f).unwrap(), p("a1+2*a2", 2));
    assert_eq!(average(&c, 0, &f).unwrap(), p("-a1^2/2", 2));
    assert_eq!(decompose(&c, 0, &f).unwrap(), (p("-a1^2/2", 2), p("a1+2*a2", 2)));
    assert_eq!(half_root(2, 0), p("a1", 2).scale(&rat(1, 2)));
}

#[test]
fn tensor_normalization_values() {
    let c = cartan("A2");
    let one = Poly::one(2);
    let got = element_from_tensor(&c, &[0], &[one.clone(), p("a1", 2)]).unwrap();
    assert_eq!(got, element(&c, &[0], &[("1", "2")]));
    let got = element_from_tensor(&c, &[0], &[one, p("a2", 2)]).unwrap();
    assert_eq!(got, element(&c, &[0], &[("0", "a2+a1/2"), ("1", "-1")]));
}

#[test]
fn right_action_values() {
    let c = cartan("A2");
    let a1 = p("a1", 2);
    assert_eq!(basis(&c, &[0], "0").right_mul(&a1).unwrap(), element(&c, &[0], &[("1", "2")]));
    // x_s·α_s = α_s²/2 is s-invariant, so it moves across the tensor sign whole
    assert_eq!(basis(&c, &[0], "1").right_mul(&a1).unwrap(), element(&c, &[0], &[("0", "a1^2/2")]));
}

#[test]
fn concatenation_of_basis_elements_concatenates_bits() {
    let c = cartan("B2");
    for (left, right) in [("10", "1"), ("0", "01"), ("11", "")] {
        let (sa, sb) = (vec![0; left.len()], vec![1; right.len()]);
        let joint: Vec<usize> = sa.iter().chain(&sb).copied().collect();
        let got = concat(&basis(&c, &sa, left), &basis(&c, &sb, right)).unwrap();
        assert_eq!(got, basis(&c, &joint, &format!("{left}{right}")));
    }
}

#[test]
fn products_of_c_elements() {
    let c = cartan("A2");
    assert_eq!(c_product(&c, &[0]).unwrap(), element(&c, &[0], &[("0", "a1/2"), ("1", "1")]));
    for seq in [vec![0, 1], vec![0, 1, 0], vec![1, 1, 0, 1]] {
        let diff = c_product(&c, &seq).unwrap().try_sub(&normal_element(&c, &seq).unwrap()).unwrap();
        assert!(in_lower_terms(&diff), "{seq:?}");
    }
    assert_eq!(graded_rank(&c, &[0, 1, 0]).unwrap().to_string(), "1+3v^2+3v^4+v^6");
}

#[test]
fn localization_values() {
    let c = cartan("A2");
    let x = half_root(2, 0);
    let b1 = basis(&c, &[0], "1");
    let at_identity = b1.localize(&Gallery::new(vec![0], 0).unwrap()).unwrap();
    assert!(at_identity.twist.is_identity());
    assert_eq!(at_identity.value, x);
    let at_s = b1.localize(&Gallery::new(vec![0], 1).unwrap()).unwrap();
    assert_eq!(at_s.twist, c.reflection(0).unwrap());
    assert_eq!(at_s.value, -&x);

    let m = localization_matrix(&c, &[0], 6).unwrap();
    assert_eq!(m.entries, vec![vec![Poly::one(2), x.clone()], vec![Poly::one(2), -&x]]);
    assert_eq!(m.determinant, Some(p("-a1", 2)));
    assert!(localization_matrix(&c, &[0, 1, 0], 6).unwrap().full_rank);
}

#[test]
fn standard_bimodule_values() {
    let c = cartan("A2");
    let s = c.reflection(0).unwrap();
    let id = c.weyl_from_word(&[]).unwrap();
    let rs = StandardElement::new(c.clone(), s.clone(), Poly::one(2)).unwrap();
    let prod = standard_tensor(&rs, &rs).unwrap();
    assert!(prod.twist.is_identity());
    assert!(prod.value.is_one());
    let alpha = StandardElement::new(c.clone(), id, p("a1", 2)).unwrap();
    let prod = standard_tensor(&rs, &alpha).unwrap();
    assert_eq!((prod.twist, prod.value), (s, p("-a1", 2)));
}

#[test]
fn one_color_generator_columns() {
    let c = cartan("A2");
    let x1 = half_root(2, 0);
    let x2 = half_root(2, 1);
    let top = dot_top(&c, &[0], 1).unwrap();
    assert_eq!(column(&top, "0"), element(&c, &[], &[("", "1")]));
    assert_eq!(column(&top, "1"), element(&c, &[], &[("", "a1/2")]));
    let top = dot_top(&c, &[0, 1], 2).unwrap();
    assert_eq!(column(&top, "00"), basis(&c, &[0], "0"));
    assert_eq!(column(&top, "01"), basis(&c, &[0], "0").right_mul(&x2).unwrap());
    let top = dot_top(&c, &[0, 1], 1).unwrap();
    assert_eq!(column(&top, "10"), basis(&c, &[1], "0").left_mul(&x1).unwrap());

    let bot = dot_bot(&c, &[], 0, 0).unwrap();
    assert_eq!(column(&bot, ""), element(&c, &[0], &[("0", "a1/2"), ("1", "1")]));
    assert_eq!(bot.degree(), 2);
    let bot = dot_bot(&c, &[1], 0, 0).unwrap();
    assert_eq!(
        column(&bot, "0"),
        basis(&c, &[0, 1], "00").left_mul(&x1).unwrap().try_add(&basis(&c, &[0, 1], "10")).unwrap()
    );

    let sp = split(&c, &[0], 1).unwrap();
    assert_eq!(column(&sp, "0"), basis(&c, &[0, 0], "00"));
    assert_eq!(column(&sp, "1"), basis(&c, &[0, 0], "01"));
    let mg = merge(&c, &[0, 0], 1).unwrap();
    assert_eq!(column(&mg, "10"), basis(&c, &[0], "0"));
    assert_eq!(column(&mg, "11"), basis(&c, &[0], "1"));
    assert_eq!(mg.degree(), -2);
    assert!(compose(&mg, &sp).unwrap().is_zero());
}

#[test]
fn non_morphism_is_rejected() {
    let c = cartan("A2");
    let columns = vec![[(0, Poly::one(2))].into_iter().collect(), Default::default()];
    let m = Morphism::from_columns(c, vec![0], vec![0], 0, columns).unwrap();
    assert!(!m.is_bimodule_morphism());
}

#[test]
fn vertex_values() {
    let c = cartan("A1xA1");
    let f = solve_vertex(&c, 0, 1).unwrap();
    assert_eq!(column(&f, "00"), basis(&c, &[1, 0], "00"));
    let diff = column(&f, "11").try_sub(&basis(&c, &[1, 0], "11")).unwrap();
    assert!(in_lower_terms(&diff));
    let jw = jones_wenzl(&c, 0, 1).unwrap();
    assert_eq!(column(&jw, "00"), basis(&c, &[0, 1], "00"));

    let c = cartan("A2");
    let f = solve_vertex(&c, 0, 1).unwrap();
    let image = f.apply(&normal_element(&c, &[0, 1, 0]).unwrap()).unwrap();
    assert!(image.coeff(bits("111")).is_one());
}

#[test]
fn diagram_relations() {
    let dot_merge = parse_diagram(
        r#"{"cartan": "A2", "bottom": ["1"], "slices": [{"gen": "dot_bot", "strand": 1, "color": "1"}, {"gen": "merge", "strand": 1}]}"#,
    )
    .unwrap();
    let identity = parse_diagram(r#"{"cartan": "A2", "bottom": ["1"], "slices": []}"#).unwrap();
    assert!(check_relation(&dot_merge, &identity).unwrap().equal);

    let twice = parse_diagram(r#"{"cartan": "B2", "bottom": [1, 2, 1, 2], "slices": [{"gen": "jw", "strand": 1}, {"gen": "jw", "strand": 1}]}"#)
        .unwrap();
    let once = parse_diagram(r#"{"cartan": "B2", "bottom": [1, 2, 1, 2], "slices": [{"gen": "jw", "strand": 1}]}"#).unwrap();
    assert!(check_relation(&twice, &once).unwrap().equal);

    let barbell =
        parse_diagram(r#"{"cartan": "A2", "bottom": [], "slices": [{"gen": "dot_bot", "strand": 0, "color": "2"}, {"gen": "dot_top", "strand": 1}]}"#)
            .unwrap();
    let m = barbell.evaluate().unwrap();
    assert_eq!(m.degree(), 2);
    assert_eq!(m.entry(0, 0), p("a2", 2));
}
