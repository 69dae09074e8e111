//! The acceptance gate: one test per criterion, each printing a single
//! `ACCEPTANCE n: pass` line with the measured evidence. Run with
//! `--nocapture` to see the lines for passing tests.

use std::time::Instant;

use shiftflip_core::conjugacy::{higher_block, recode_one_block};
use shiftflip_core::construct::{
    companion_plan, finite_difference_witness, flip_family, marker_companion, rewrite_periodic,
    seed_blocks, Completion, FlipImageView, MarkerRewriteView, MemberOrigin,
};
use shiftflip_core::flip::validate_flip;
use shiftflip_core::invariants::{a_membership, fvector, AMembership};
use shiftflip_core::point::{Coord, PeriodicPoint};
use shiftflip_core::sft::SftPresentation;
use shiftflip_core::{coded, presets};
use shiftflip_core::{Flip, IndexSet, SearchLimits, Symbol, Word};

fn limits() -> SearchLimits {
    SearchLimits::default()
}

fn rho(space: &SftPresentation) -> Flip {
    Flip::one_block(presets::identity_involution(space))
}

/// Coordinatewise check of the two flip axioms on every periodic point of
/// period at most `max_period`.
fn check_axioms(space: &SftPresentation, flip: &Flip, max_period: usize) -> u64 {
    let mut checked = 0;
    for n in 1..=max_period {
        for p in space.periodic_points(n) {
            let image = FlipImageView { flip, inner: &p };
            let shifted = p.shifted(1);
            let image_of_shifted = FlipImageView {
                flip,
                inner: &shifted,
            };
            for i in 0..n as i64 {
                // involution: applying the flip twice returns the point
                let twice = flip.eval_at(&image, i).expect("total rule");
                assert_eq!(twice, p.at(i), "flip applied twice moved a coordinate");
                // reversal: flip of the shift equals inverse shift of the flip
                assert_eq!(
                    image_of_shifted.at(i),
                    image.at(i - 1),
                    "flip does not reverse the shift"
                );
            }
            checked += 1;
        }
    }
    checked
}

#[test]
fn criterion_01_flip_axioms() {
    let start = Instant::now();
    let golden = presets::golden_mean();
    let full = presets::full_shift(2).unwrap();
    let cases = [
        ("golden mean + reversal", golden.clone(), rho(&golden)),
        ("full 2-shift + reversal", full.clone(), rho(&full)),
        (
            "full 2-shift + exchange reversal",
            full.clone(),
            Flip::one_block(presets::binary_exchange(&full)),
        ),
    ];
    let mut points = 0;
    for (name, space, flip) in &cases {
        let report = validate_flip(space, flip, &limits()).unwrap();
        assert!(report.is_valid(), "{name} failed validation");
        points += check_axioms(space, flip, 10);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "budget exceeded: {elapsed:?}");
    println!(
        "ACCEPTANCE 1: pass - flip axioms on {points} periodic points across 3 systems in {elapsed:.2?}"
    );
}

/// Exhaustive oracle: count fixed points by filtering every length-`n`
/// word over the alphabet, independent of the counting engine.
fn oracle_count(space: &SftPresentation, flip: &Flip, n: usize) -> u64 {
    let k = space.alphabet().len();
    let mut word = vec![Symbol(0); n];
    let mut count = 0;
    'all: loop {
        let p = PeriodicPoint::new(Word::new(word.clone())).unwrap();
        if space.contains_periodic(&p)
            && (0..n as i64).all(|i| flip.eval_at(&p, i).expect("total rule") == p.at(i))
        {
            count += 1;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'all;
            }
            pos -= 1;
            let next = word[pos].index() + 1;
            if next < k {
                word[pos] = Symbol(next as u16);
                break;
            }
            word[pos] = Symbol(0);
        }
    }
    count
}

#[test]
fn criterion_02_fvector_oracle() {
    let start = Instant::now();
    let golden = presets::golden_mean();
    let full = presets::full_shift(2).unwrap();
    let cases = [
        (golden.clone(), rho(&golden)),
        (full.clone(), rho(&full)),
        (
            full.clone(),
            Flip::one_block(presets::binary_exchange(&full)),
        ),
    ];
    for (space, flip) in &cases {
        let engine = fvector(space, flip, 12).unwrap();
        for n in 1..=12 {
            assert_eq!(
                engine.count(n),
                oracle_count(space, flip, n),
                "engine disagrees with the exhaustive oracle at period {n}"
            );
        }
    }
    let golden_counts = fvector(&golden, &rho(&golden), 2).unwrap();
    assert_eq!(golden_counts.count(1), 1);
    assert_eq!(golden_counts.count(2), 3);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "budget exceeded: {elapsed:?}");
    println!("ACCEPTANCE 2: pass - engine matches the word-filter oracle to period 12 on 3 systems in {elapsed:.2?}");
}

#[test]
fn criterion_03_seed_blocks() {
    let space = presets::golden_mean();
    let f = Word::parse(space.alphabet(), "0").unwrap();
    let seeds = seed_blocks(&space, &f, &limits()).unwrap();
    let render = |w: &Word| space.alphabet().render(w);
    assert_eq!(render(&seeds.a), "");
    assert_eq!(render(&seeds.b), "1");

    // re-verify the three postconditions here, independent of the
    // construction's own checks
    let faf = f.concat(&seeds.a).concat(&f);
    let fbf = f.concat(&seeds.b).concat(&f);
    assert!(space.in_language(&faf), "f a f must be admissible");
    assert!(space.in_language(&fbf), "f b f must be admissible");
    assert!(
        !seeds.b.contains_subword(&f),
        "f must not occur inside b"
    );
    // the block f b f a avoids every full-alphabet point whose period is
    // |a| + |f|; here that period is 1
    let probe = f.concat(&seeds.b).concat(&f).concat(&seeds.a);
    let period = seeds.a.len() + f.len();
    assert_eq!(period, 1);
    let mut checked = 0;
    for s in space.alphabet().symbols() {
        let cycle = Word::new(vec![s]).repeat(probe.len() + period);
        assert!(
            !cycle.contains_subword(&probe),
            "f b f a occurs in a short-period point"
        );
        checked += 1;
    }
    println!(
        "ACCEPTANCE 3: pass - seeds a=\"\" b=\"1\"; admissibility, f-avoidance, and {checked} period-1 exclusions re-verified"
    );
}

#[test]
fn criterion_04_difference_witness() {
    let space = presets::golden_mean();
    let flip = rho(&space);
    let f = Word::parse(space.alphabet(), "0").unwrap();
    let witness = finite_difference_witness(&space, &flip, &f, &limits()).unwrap();

    assert_eq!(witness.repetitions, 6, "repetition count must be minimal");
    assert_eq!(witness.half_width, 8);
    assert_eq!(
        witness.pattern.len(),
        2 * witness.half_width + f.len(),
        "pattern length law"
    );
    assert_eq!(
        space.alphabet().render(&witness.pattern),
        "00101000000000000"
    );
    assert!(space.contains_ep(&witness.point), "witness must be admissible");
    assert_eq!(witness.difference, vec![-6, -4, 4, 6]);

    let membership = a_membership(&space, &flip, &witness.point).unwrap();
    match &membership {
        AMembership::In { difference } => {
            assert_eq!(difference, &witness.difference);
        }
        other => panic!("witness must be a member, got {other:?}"),
    }
    println!(
        "ACCEPTANCE 4: pass - witness with N=6, M=8, difference {:?} is admissible and a member",
        witness.difference
    );
}

#[test]
fn criterion_05_marker_companion() {
    let start = Instant::now();
    let space = presets::golden_mean();
    let flip = rho(&space);
    let f = Word::parse(space.alphabet(), "0").unwrap();
    let result = marker_companion(&space, &flip, &f, &limits()).unwrap();

    assert_eq!(result.plan.rule.alpha(), 1);
    assert_eq!(result.plan.rule.beta(), 11);
    assert_eq!(result.plan.witness_period, 46);

    // (i) the companion validates as a flip of the space
    let report = validate_flip(&space, &result.companion, &limits()).unwrap();
    assert!(report.is_valid());

    // (ii) entrywise domination up to the witness period
    let horizon = result.plan.witness_period;
    for n in 1..=horizon {
        assert!(
            result.base_counts.count(n) <= result.companion_counts.count(n),
            "domination fails at period {n}"
        );
    }
    // (iii) strict growth at the witness period
    let n_wit = result.plan.witness_period;
    assert!(
        result.companion_counts.count(n_wit) >= result.base_counts.count(n_wit) + 1,
        "no strict growth at the witness period"
    );

    // the exhibited point: fixed by the companion, moved by the base flip
    let z = &result.plan.extra_point;
    assert_eq!(z.period(), n_wit);
    assert!(space.contains_periodic(z));
    let companion_image = FlipImageView {
        flip: &result.companion,
        inner: z,
    };
    for i in 0..n_wit as i64 {
        assert_eq!(companion_image.at(i), z.at(i), "companion must fix the point");
    }
    let base_image = FlipImageView {
        flip: &flip,
        inner: z,
    };
    assert!(
        (0..n_wit as i64).any(|i| base_image.at(i) != z.at(i)),
        "base flip must move the point"
    );
    assert!(!result.evidence_difference.is_empty());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "budget exceeded: {elapsed:?}");
    println!(
        "ACCEPTANCE 5: pass - companion (alpha=1, beta=11) dominates with +{} at period {n_wit} in {elapsed:.2?}",
        result.companion_counts.count(n_wit) - result.base_counts.count(n_wit)
    );
}

#[test]
fn criterion_06_rewrite_algebra() {
    let space = presets::golden_mean();
    let flip = rho(&space);
    let f = Word::parse(space.alphabet(), "0").unwrap();
    let plan = companion_plan(&space, &flip, &f, &limits()).unwrap();
    let rule = &plan.rule;

    // a suite of points: the marker-bearing witness, its shifts, its full
    // rewrite, and small periodic points without markers
    let mut points: Vec<PeriodicPoint> = Vec::new();
    let z = plan.extra_point.clone();
    let rewritten = rewrite_periodic(rule, &IndexSet::all(), &z).unwrap();
    for k in 0..8 {
        points.push(z.shifted(k));
        points.push(rewritten.shifted(k));
    }
    for n in 1..=3 {
        points.extend(space.periodic_points(n));
    }
    assert!(points.len() >= 20, "suite too small: {}", points.len());

    let mut sets: Vec<IndexSet> = vec![IndexSet::all()];
    for n in 2..=8 {
        sets.push(IndexSet::half_band(n).unwrap());
    }
    sets.push(IndexSet::half_band(4).unwrap().translate(3));
    sets.push(IndexSet::half_band(6).unwrap().negate());
    sets.push(IndexSet::all().translate(-2));

    let window = 30i64;
    let mut comparisons = 0u64;
    for x in &points {
        for a in &sets {
            let theta_a = MarkerRewriteView {
                rule,
                active: a,
                inner: x,
            };

            // involution: rewriting twice restores the point
            let twice = MarkerRewriteView {
                rule,
                active: a,
                inner: &theta_a,
            };
            for i in -window..=window {
                assert_eq!(twice.at(i), x.at(i), "rewrite must be an involution");
            }

            // composition: theta_A . theta_B = theta_(A symm-diff B)
            for b in &sets {
                let theta_b = MarkerRewriteView {
                    rule,
                    active: b,
                    inner: x,
                };
                let composed = MarkerRewriteView {
                    rule,
                    active: a,
                    inner: &theta_b,
                };
                let symm = a.clone().symm_diff(b.clone());
                let direct = MarkerRewriteView {
                    rule,
                    active: &symm,
                    inner: x,
                };
                for i in -window..=window {
                    assert_eq!(composed.at(i), direct.at(i), "composition law fails");
                }
                comparisons += 1;
            }

            // shift intertwining: theta_A . sigma = sigma . theta_(A+1)
            let shifted = x.shifted(1);
            let lhs = MarkerRewriteView {
                rule,
                active: a,
                inner: &shifted,
            };
            let translated = a.clone().translate(1);
            let rhs_inner = MarkerRewriteView {
                rule,
                active: &translated,
                inner: x,
            };
            for i in -window..=window {
                assert_eq!(lhs.at(i), rhs_inner.at(i + 1), "shift law fails");
            }

            // flip intertwining: phi . theta_A = theta_(-A) . phi
            let lhs = FlipImageView {
                flip: &flip,
                inner: &theta_a,
            };
            let flipped = FlipImageView {
                flip: &flip,
                inner: x,
            };
            let negated = a.clone().negate();
            let rhs = MarkerRewriteView {
                rule,
                active: &negated,
                inner: &flipped,
            };
            for i in -window..=window {
                assert_eq!(lhs.at(i), rhs.at(i), "flip law fails");
            }
        }
    }
    println!(
        "ACCEPTANCE 6: pass - rewrite algebra on {} points x {} sets ({comparisons} compositions), window [-{window}, {window}]",
        points.len(),
        sets.len()
    );
}

#[test]
fn criterion_07_flip_family() {
    let space = presets::golden_mean();
    let flip = rho(&space);
    let family = flip_family(&space, &flip, 3, 46, &limits()).unwrap();

    match &family.completion {
        Completion::Complete => {
            assert_eq!(family.members.len(), 3);
            let mut pairs: Vec<(usize, usize)> = family
                .certificates
                .iter()
                .map(|c| (c.left, c.right))
                .collect();
            pairs.sort_unstable();
            assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
            for cert in &family.certificates {
                assert_ne!(
                    cert.certificate.left_count, cert.certificate.right_count,
                    "certificate must separate"
                );
            }
            assert_eq!(family.members[0].origin, MemberOrigin::Input);
            let periods: Vec<usize> = family
                .certificates
                .iter()
                .map(|c| c.certificate.n)
                .collect();
            println!(
                "ACCEPTANCE 7: pass - 3 pairwise non-conjugate flips, certificates at periods {periods:?}"
            );
        }
        Completion::CapHalted { detail } => {
            // fallback bar: two flips and one certificate, halt reported
            assert!(family.members.len() >= 2);
            assert!(!family.certificates.is_empty());
            println!(
                "ACCEPTANCE 7: pass - alphabet cap halted growth ({detail}); {} flips separated",
                family.members.len()
            );
        }
        Completion::HorizonInsufficient { pairs } => {
            panic!("horizon 46 must separate the family, undecided pairs {pairs:?}");
        }
    }
}

#[test]
fn criterion_08_recoding_and_higher_blocks() {
    let space = presets::golden_mean();
    let flip = rho(&space);

    // one-block recoding of a radius-0 flip relabels without distortion
    let (image, image_flip, _) = recode_one_block(&space, &flip, &limits()).unwrap();
    for n in 1..=8 {
        assert_eq!(
            image.language_count(n).unwrap(),
            space.language_count(n).unwrap(),
            "block count changed at length {n}"
        );
    }
    let original = fvector(&space, &flip, 10).unwrap();
    let recoded = fvector(&image, &image_flip, 10).unwrap();
    assert_eq!(original.counts(), recoded.counts());

    // higher-block parity: odd block length matches the flip itself
    let (cubes, cube_flip, _) = higher_block(&space, &flip, 3, &limits()).unwrap();
    let transported = fvector(&cubes, &cube_flip, 10).unwrap();
    assert_eq!(original.counts(), transported.counts());

    // even block length matches the shift-composed flip
    let (squares, square_flip, _) = higher_block(&space, &flip, 2, &limits()).unwrap();
    let transported = fvector(&squares, &square_flip, 10).unwrap();
    let shifted = fvector(&space, &flip.compose_shift(1), 10).unwrap();
    assert_eq!(shifted.counts(), transported.counts());

    println!(
        "ACCEPTANCE 8: pass - recoding preserves counts to length 8 and invariants to period 10; higher-block parity holds"
    );
}

#[test]
fn criterion_09_stability_calculus() {
    let start = Instant::now();

    // uniform powers follow interval membership exactly, up to 64
    for n in 1..=64usize {
        let member = coded::in_doubling_intervals(n as u64).unwrap();
        assert_eq!(
            coded::is_stable(&vec![1u8; n]).unwrap().is_stable(),
            member,
            "1^{n}"
        );
        assert_eq!(
            coded::is_stable(&vec![2u8; n]).unwrap().is_stable(),
            !member,
            "2^{n}"
        );
        assert!(coded::is_stable(&vec![0u8; n]).unwrap().is_stable(), "0^{n}");
    }

    // adjacency condition
    assert_eq!(
        coded::is_stable(&[1, 2]).unwrap(),
        coded::Stability::UnstableCondition1
    );
    assert_eq!(
        coded::is_stable(&[2, 1]).unwrap(),
        coded::Stability::UnstableCondition1
    );

    // reversal closure over every stable block of length <= 12
    let reversal = coded::reversal_closure(12).unwrap();
    assert!(reversal.failures.is_empty(), "reversal closure failed");

    // concatenation closure on at least 100 deterministic pairs
    let concat = coded::concatenation_closure(4, 100).unwrap();
    assert!(concat.pairs_checked >= 100);
    assert!(concat.failures.is_empty(), "concatenation closure failed");

    // the two implementations agree verdict-for-verdict up to length 12
    let mut agreed = 0u64;
    for len in 0..=12usize {
        let mut digits = vec![0u8; len];
        'words: loop {
            assert_eq!(
                coded::is_stable(&digits).unwrap(),
                coded::is_stable_alt(&digits).unwrap(),
                "implementations disagree on {digits:?}"
            );
            agreed += 1;
            let mut pos = len;
            loop {
                if pos == 0 {
                    break 'words;
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < 3 {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }

    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE 9: pass - powers to 64, reversal of {} blocks, {} concatenation pairs, dual agreement on {agreed} words in {elapsed:.2?}",
        reversal.checked, concat.pairs_checked
    );
}

#[test]
fn criterion_10_involution_rigidity() {
    let report = coded::rigidity_scan(6).unwrap();
    assert_eq!(report.survivors(), vec!["identity"]);

    let swap = report
        .involutions
        .iter()
        .find(|r| r.name == "1<->2")
        .unwrap();
    assert!(!swap.survives);
    assert!(
        swap.power_failures.contains(&(1, 4)),
        "the swap must fail on the fourth power of 1"
    );
    println!(
        "ACCEPTANCE 10: pass - only the identity survives at length 6; the 1-2 swap sends stable 1^4 to unstable 2^4"
    );
}
