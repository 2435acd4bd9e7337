//! The reference genus-2 example over GF(25): y^2 = x^5 + x with
//! u^2 + 4u + 2 = 0, G of order 6 generated by x -> 1/x - u^3, r = 4,
//! delta = 3. Places, functions and the 5 x 36 generator below are
//! transcribed by hand and compared with what the recipe computes.

use std::collections::{BTreeSet, HashMap};

use curvelrc::curve::{CurveModel, Place};
use curvelrc::funcspace::{CurveFunction, FunctionSpace};
use curvelrc::gf::{Fe, Field};
use curvelrc::linalg::Matrix;
use curvelrc::recipes::{genus2, BasisSpec};

fn field() -> Field {
    Field::new(5, 2, Some(&[2, 4, 1])).unwrap()
}

/// "u^k", "u" or a small integer.
fn el(f: &Field, s: &str) -> Fe {
    let u = f.from_coeffs(&[0, 1]).unwrap();
    match s.strip_prefix('u') {
        Some("") => u,
        Some(e) => f.pow(u, e.trim_start_matches('^').parse().unwrap()),
        None => f.int(s.parse().unwrap()),
    }
}

fn place(f: &Field, x: &str, y: &str) -> Place {
    Place::affine(el(f, x), el(f, y))
}

const GROUPS: [[(&str, &str); 6]; 6] = [
    [("u^13", "2"), ("u^22", "u^21"), ("u^7", "u^3"), ("u^8", "2"), ("u^10", "u^15"), ("4", "u^9")],
    [("u^4", "4"), ("u^14", "u^9"), ("1", "u^15"), ("u^2", "u^15"), ("u^5", "1"), ("u^23", "u^9")],
    [("u^4", "1"), ("1", "u^3"), ("u^5", "4"), ("u^2", "u^3"), ("u^23", "u^21"), ("u^14", "u^21")],
    [("u^17", "3"), ("u^11", "u^15"), ("2", "2"), ("u", "4"), ("u^19", "u^9"), ("3", "1")],
    [("u^17", "2"), ("u^19", "u^21"), ("u^11", "u^3"), ("u", "1"), ("3", "4"), ("2", "3")],
    [("u^7", "u^15"), ("u^8", "3"), ("u^22", "u^9"), ("4", "u^21"), ("u^13", "3"), ("u^10", "u^3")],
];

const MATRIX: [&str; 5] = [
    "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1",
    "3 u^19 u^5 u^17 u^5 2 2 u^8 u^17 4 u^4 u^9 0 u^3 u^19 3 u^8 u^9 \
     0 u^13 u^19 u^3 u^20 3 2 u^23 u^15 u^17 4 u^4 u^22 u^3 u^4 0 4 u^22",
    "u^13 u^13 u^20 3 u^8 u^17 u^21 u^20 u^19 u^5 u^14 u^8 u^17 3 u^5 u^14 u^15 4 \
     u^2 u^17 4 u^11 3 u^15 u^7 u^19 u^21 1 u^8 u^20 4 u^19 u^3 u^21 u^3 u^15",
    "u^10 0 u^17 u^9 u^23 u^16 u^5 u^2 u^17 3 u^19 u^8 u^2 u^13 u^21 1 u^16 u^5 \
     u^13 u^19 u^19 u^16 u^10 u u^17 u u^21 u^8 u^10 u^21 u^13 u^23 4 u^8 u u^9",
    "0 0 0 0 0 0 4 4 4 4 4 4 u^16 u^16 u^16 u^16 u^16 u^16 \
     u^7 u^7 u^7 u^7 u^7 u^7 u^15 u^15 u^15 u^15 u^15 u^15 u^11 u^11 u^11 u^11 u^11 u^11",
];

fn reference_places(f: &Field) -> Vec<Place> {
    GROUPS.iter().flatten().map(|&(x, y)| place(f, x, y)).collect()
}

fn reference_matrix(f: &Field) -> Matrix {
    let rows: Vec<Vec<Fe>> = MATRIX.iter().map(|r| r.split_whitespace().map(|t| el(f, t)).collect()).collect();
    assert!(rows.iter().all(|r| r.len() == 36));
    Matrix::from_rows(f, &rows).unwrap()
}

/// c3 x^3 + c2 x^2 + c1 x + c0 from tokens, highest first.
fn cubic(f: &Field, c: [&str; 4]) -> Vec<Fe> {
    c.iter().rev().map(|t| el(f, t)).collect()
}

/// a y / h(x) + b.
fn y_over(f: &Field, a: &str, h: Vec<Fe>, b: &str) -> CurveFunction {
    let mut num: Vec<((usize, usize), Fe)> = vec![((0, 1), el(f, a))];
    num.extend(h.iter().enumerate().map(|(i, &c)| ((i, 0), f.mul(c, el(f, b)))));
    CurveFunction::new(num, h).unwrap()
}

/// The example's z = (u^5 x^3 + u^7 x^2 + u^15 x + u^5)/y + u^5, written
/// over the denominator x^5 + x as c(x) y / (x^5 + x) + u^5.
fn reference_z(f: &Field) -> CurveFunction {
    let c = cubic(f, ["u^5", "u^7", "u^15", "u^5"]);
    let den = vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE];
    let mut num: Vec<((usize, usize), Fe)> = c.iter().enumerate().map(|(i, &a)| ((i, 1), a)).collect();
    num.extend(den.iter().enumerate().map(|(i, &a)| ((i, 0), f.mul(a, el(f, "u^5")))));
    CurveFunction::new(num, den).unwrap()
}

fn reference_ws(f: &Field) -> Vec<CurveFunction> {
    vec![
        CurveFunction::constant(Fe::ONE),
        y_over(f, "u^7", cubic(f, ["1", "u^15", "2", "u^21"]), "1"),
        y_over(f, "u^9", cubic(f, ["1", "u^21", "3", "u^15"]), "u^10"),
        y_over(f, "u^21", cubic(f, ["1", "u^21", "4", "0"]), "2"),
    ]
}

#[test]
fn transcribed_matrix_is_the_evaluation_of_the_transcribed_functions() {
    let f = field();
    let fam = genus2(25, None).unwrap();
    let fs = FunctionSpace::new(&fam.curve);
    let places = reference_places(&f);
    assert!(places.iter().all(|p| fam.curve.contains(p)));
    let g = reference_matrix(&f);
    let mut funcs = reference_ws(&f);
    funcs.push(reference_z(&f));
    for (row, func) in funcs.iter().enumerate() {
        let vals: Vec<Fe> = places.iter().map(|p| fs.eval(func, p).unwrap().unwrap()).collect();
        assert_eq!(vals, g.row(row), "row {row}");
    }
}

#[test]
fn groups_and_defining_list_match() {
    let f = field();
    let fam = genus2(25, None).unwrap();
    let ours: BTreeSet<BTreeSet<Place>> = fam.groups.iter().map(|g| g.iter().copied().collect()).collect();
    let theirs: BTreeSet<BTreeSet<Place>> =
        GROUPS.iter().map(|g| g.iter().map(|&(x, y)| place(&f, x, y)).collect()).collect();
    assert_eq!(ours, theirs);
    let BasisSpec::Ladder { defining } = &fam.basis else { panic!("genus-2 family uses a ladder") };
    let expected: BTreeSet<Place> = ["u^3", "u^21", "u^9", "u^15", "0"]
        .iter()
        .map(|x| place(&f, x, "0"))
        .chain([Place::Infinity])
        .collect();
    assert_eq!(defining.iter().copied().collect::<BTreeSet<_>>(), expected);
    assert_eq!(defining.last(), Some(&Place::Infinity));
}

#[test]
fn generator_row_space_matches() {
    let f = field();
    let code = genus2(25, None).unwrap().build(1, 6).unwrap();
    let col_of: HashMap<Place, usize> = code.places.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let order: Vec<usize> = reference_places(&f).iter().map(|p| col_of[p]).collect();
    let ours = code.generator.select_columns(&order);
    let theirs = reference_matrix(&f);
    assert_eq!(ours.rank(), 5);
    assert_eq!(theirs.rank(), 5);
    let mut stacked = ours.to_rows();
    stacked.extend(theirs.to_rows());
    assert_eq!(Matrix::from_rows(&f, &stacked).unwrap().rank(), 5);
}

#[test]
fn z_agrees_up_to_affine_change() {
    let f = field();
    let fam = genus2(25, None).unwrap();
    assert!(matches!(fam.curve, CurveModel::Superelliptic(_)));
    let code = fam.build(1, 6).unwrap();
    let fs = FunctionSpace::new(&fam.curve);
    let z = reference_z(&f);
    let theirs: Vec<Fe> = code.places.iter().map(|p| fs.eval(&z, p).unwrap().unwrap()).collect();
    let ours: Vec<Fe> = code.groups.iter().flat_map(|g| g.clone().map(|c| code.z_values[code.group_of_column()[c]])).collect();
    // Fit theirs = a * ours + b on the first two groups, check everywhere.
    let (o0, o1, t0, t1) = (ours[0], ours[6], theirs[0], theirs[6]);
    let a = f.div(f.sub(t1, t0), f.sub(o1, o0));
    let b = f.sub(t0, f.mul(a, o0));
    assert!(!a.is_zero());
    for (o, t) in ours.iter().zip(&theirs) {
        assert_eq!(f.add(f.mul(a, *o), b), *t);
    }
}
