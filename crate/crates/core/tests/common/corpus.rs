//! Hand-built integer chains with singular upper blocks, rank-deficient
//! Wronskians and repeated frames.

use cyclidx::{FrameChain, LagrangianFrame, Mat, Tolerance};

pub struct Fixture {
    pub name: &'static str,
    pub chain: FrameChain,
}

fn f(n: usize, rows: &[f64]) -> LagrangianFrame {
    LagrangianFrame::new(Mat::from_row_slice(2 * n, n, rows), &Tolerance::default())
        .unwrap_or_else(|e| panic!("fixture frame {rows:?}: {e}"))
}

fn line(x: f64, u: f64) -> LagrangianFrame {
    f(1, &[x, u])
}

/// `(X; U)` from row-major `n x n` blocks.
fn xu(n: usize, x: &[f64], u: &[f64]) -> LagrangianFrame {
    let mut rows = x.to_vec();
    rows.extend_from_slice(u);
    f(n, &rows)
}

pub fn corpus() -> Vec<Fixture> {
    let (v1, h1) = (line(0.0, 1.0), line(1.0, 0.0));
    let i2 = [1.0, 0.0, 0.0, 1.0];
    let z2 = [0.0; 4];
    let v = xu(2, &z2, &i2);
    let h = xu(2, &i2, &z2);
    let a = xu(2, &[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]);
    let b = xu(2, &[0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0]);
    let p1 = xu(2, &i2, &[1.0, 1.0, 1.0, 1.0]);
    let p2 = xu(2, &i2, &[0.0, 1.0, 1.0, 0.0]);
    let p3 = xu(2, &i2, &[1.0, 0.0, 0.0, -1.0]);
    let s1 = xu(2, &[1.0, 1.0, 1.0, 1.0], &i2);
    let s3 = xu(2, &[1.0, 0.0, 0.0, 0.0], &[-1.0, 0.0, 0.0, 1.0]);
    let i3 = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let z3 = [0.0; 9];
    let v3 = xu(3, &z3, &i3);
    let h3 = xu(3, &i3, &z3);
    let mixed3 = xu(
        3,
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
    );
    let d3 = xu(3, &i3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
    let r3 = xu(3, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0], &i3);

    let raw: Vec<(&'static str, Vec<LagrangianFrame>)> = vec![
        ("n1 vertical horizontal", vec![v1.clone(), h1.clone()]),
        ("n1 repeated vertical", vec![v1.clone(), v1.clone()]),
        (
            "n1 all horizontal",
            vec![h1.clone(), h1.clone(), h1.clone()],
        ),
        (
            "n1 curated triple",
            vec![h1.clone(), v1.clone(), line(1.0, 1.0)],
        ),
        (
            "n1 doubled pairs",
            vec![v1.clone(), v1.clone(), h1.clone(), h1.clone()],
        ),
        (
            "n1 repeated slope",
            vec![line(1.0, 1.0), line(1.0, 1.0), line(1.0, -1.0), v1.clone()],
        ),
        (
            "n1 five lines",
            vec![
                line(0.0, 2.0),
                line(3.0, 0.0),
                line(0.0, -1.0),
                line(1.0, 1.0),
                line(-1.0, 1.0),
            ],
        ),
        ("n2 vertical horizontal", vec![v.clone(), h.clone()]),
        ("n2 vertical half", vec![v.clone(), a.clone()]),
        ("n2 complementary halves", vec![a.clone(), b.clone()]),
        ("n2 repeated half", vec![a.clone(), a.clone(), b.clone()]),
        (
            "n2 vertical half horizontal",
            vec![v.clone(), a.clone(), h.clone()],
        ),
        ("n2 half variants", vec![a.clone(), s3.clone(), b.clone()]),
        ("n2 singular graph", vec![p1.clone(), v.clone(), h.clone()]),
        ("n2 three graphs", vec![p1.clone(), p2.clone(), p3.clone()]),
        ("n2 singular upper", vec![s1.clone(), v.clone(), p1.clone()]),
        (
            "n2 repeated singular upper",
            vec![s1.clone(), s1.clone(), h.clone(), v.clone()],
        ),
        (
            "n2 mixed four",
            vec![a.clone(), p3.clone(), b.clone(), s3.clone()],
        ),
        ("n2 all vertical", vec![v.clone(), v.clone(), v.clone()]),
        (
            "n2 alternating",
            vec![h.clone(), p1.clone(), h.clone(), p1.clone()],
        ),
        (
            "n2 alternating halves",
            vec![a.clone(), b.clone(), a.clone(), b.clone(), v.clone()],
        ),
        (
            "n2 five mixed",
            vec![s3.clone(), a.clone(), v.clone(), p2.clone(), h.clone()],
        ),
        (
            "n2 graphs and halves",
            vec![p2.clone(), s1.clone(), b.clone(), p1.clone()],
        ),
        (
            "n2 six mixed",
            vec![
                v.clone(),
                h.clone(),
                a.clone(),
                b.clone(),
                s1.clone(),
                s3.clone(),
            ],
        ),
        (
            "n3 vertical horizontal mixed",
            vec![v3.clone(), h3.clone(), mixed3.clone()],
        ),
        (
            "n3 four",
            vec![v3.clone(), d3.clone(), mixed3.clone(), v3.clone()],
        ),
        (
            "n3 rank one upper",
            vec![r3.clone(), v3.clone(), h3.clone(), r3.clone()],
        ),
    ];
    raw.into_iter()
        .map(|(name, frames)| Fixture {
            name,
            chain: FrameChain::new(frames).expect("fixture chain"),
        })
        .collect()
}
