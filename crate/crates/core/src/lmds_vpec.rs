//! A packet code built by interleaving N rows of a list-decodable [N, k]
//! linear code, each row encoded under a systematic generator whose
//! identity window is cyclically shifted by one column. Packets are the
//! array columns, so every column carries exactly k plain message symbols
//! and the per-packet rate is 1/k.
//!
//! Decoding list-decodes the received array within column radius T, then
//! erases every column on which the list disagrees: at most LT columns,
//! hence distortion at most LT/N, and never a wrong symbol as long as at
//! most T packets were altered.

use crate::code::{VpecCode, VpecParams};
use crate::gf::Symbol;
use crate::interleave::{iterative_list_decode, InterleavedCode};
use crate::lincode::{is_list_decodable, LinearCode};
use crate::packet::{all_erased, PacketLayout, PacketSet, ReconstructionWord};
use crate::ratio::{rat, Rational};
use crate::{Budget, Error, Result};

/// Parameter arithmetic shared by builders and rate tables: for N
/// packets, T alterable and list size L, returns (window fraction, row
/// dimension, per-packet rate, distortion bound). The window fraction is
/// 1 - (1+1/L)T/N and the row dimension is its numerator over N.
pub fn window_params(n: usize, t: usize, l: usize) -> Result<(Rational, usize, Rational, Rational)> {
    if t == 0 {
        return Err(Error::Infeasible("at least one alterable packet".into()));
    }
    if n < 2 * t + 1 {
        return Err(Error::Infeasible(format!(
            "{n} packets cannot tolerate {t} alterations; need at least {}",
            2 * t + 1
        )));
    }
    if l < 2 {
        return Err(Error::Infeasible("list size must be at least 2".into()));
    }
    if l * t > n {
        return Err(Error::Infeasible(format!(
            "list size {l} exceeds the packet budget: L*T = {} > N = {n}",
            l * t
        )));
    }
    if t % l != 0 {
        return Err(Error::Infeasible(format!(
            "list size {l} must divide the alteration budget {t}"
        )));
    }
    let row_k = n - t - t / l;
    let rho = rat(row_k as i64, n as i64);
    let rate = rat(1, row_k as i64);
    let distortion = rat((l * t) as i64, n as i64);
    Ok((rho, row_k, rate, distortion))
}

/// The interleaved-windows packet code.
#[derive(Clone, Debug)]
pub struct LmdsVpecCode {
    base: LinearCode,
    array: InterleavedCode,
    n: usize,
    t: usize,
    l: usize,
    rho: Rational,
    row_k: usize,
    budget: Budget,
}

/// What the decoder saw and produced.
#[derive(Clone, Debug)]
pub struct LmdsDecodeOutcome {
    pub word: ReconstructionWord,
    /// Columns erased because the decoded list disagreed there.
    pub erased_columns: Vec<usize>,
    /// The received array was a codeword and was read off directly.
    pub membership: bool,
    /// No codeword was within column distance T; everything is erased.
    pub empty_list: bool,
}

impl LmdsVpecCode {
    /// Checks the parameter arithmetic, verifies the base code is
    /// (T, L)-list decodable by exhaustive sweep, and precomputes the
    /// shifted systematic generators. The budget bounds the verification
    /// sweep and is kept for decoding.
    pub fn build(base: LinearCode, t: usize, l: usize, budget: Budget) -> Result<LmdsVpecCode> {
        let n = base.n();
        let (rho, row_k, _, _) = window_params(n, t, l)?;
        if base.k() != row_k {
            return Err(Error::Infeasible(format!(
                "base dimension {} does not match the window fraction: want {row_k}",
                base.k()
            )));
        }
        let q = base.field().order() as usize;
        if 2 * q <= l * (l + 1) {
            return Err(Error::Infeasible(format!(
                "alphabet of size {q} is too small for list size {l}; need q > L(L+1)/2"
            )));
        }
        if let Some(v) = is_list_decodable(&base, t, l, budget)? {
            return Err(Error::Infeasible(format!(
                "base code puts {} codewords within distance {t} of {:?}",
                v.codewords.len(),
                v.received
            )));
        }
        let field = base.field().clone();
        let rows = (0..n)
            .map(|i| {
                let gen = base.systematic_window_generator(i)?;
                LinearCode::from_generator(field.clone(), gen)
            })
            .collect::<Result<Vec<_>>>()?;
        let array = InterleavedCode::mixed(rows)?;
        Ok(LmdsVpecCode {
            base,
            array,
            n,
            t,
            l,
            rho,
            row_k,
            budget,
        })
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn list_size(&self) -> usize {
        self.l
    }

    pub fn window_fraction(&self) -> &Rational {
        &self.rho
    }

    pub fn row_dimension(&self) -> usize {
        self.row_k
    }

    /// Message coordinates whose systematic position lies in column j:
    /// one per row whose identity window covers the column.
    pub fn info_coordinates(&self, j: usize) -> Vec<usize> {
        (0..self.n)
            .filter_map(|i| {
                let offset = (j + self.n - i) % self.n;
                (offset < self.row_k).then(|| i * self.row_k + offset)
            })
            .collect()
    }

    /// Full decode: membership fast path, then list decoding with
    /// column-disagreement erasure.
    pub fn decode_detailed(&self, received: &PacketSet) -> Result<LmdsDecodeOutcome> {
        received.validate(&VpecCode::layout(self))?;
        let rows = depacketize(received)?;

        // The systematic windows make membership checking cheap: read the
        // would-be message off each row and re-encode. A codeword array
        // cannot have come from a different codeword (column distance
        // between codewords exceeds T), so reading it directly keeps the
        // zero-alteration case lossless.
        let mut msgs: Vec<Vec<Symbol>> = Vec::with_capacity(self.n);
        let mut member = true;
        for (i, row) in rows.iter().enumerate() {
            let msg: Vec<Symbol> = (0..self.row_k).map(|c| row[(i + c) % self.n]).collect();
            if &self.array.constituents()[i].encode(&msg)? == row {
                msgs.push(msg);
            } else {
                member = false;
                break;
            }
        }
        if member {
            return Ok(LmdsDecodeOutcome {
                word: msgs.concat().into_iter().map(Some).collect(),
                erased_columns: Vec::new(),
                membership: true,
                empty_list: false,
            });
        }

        let list = iterative_list_decode(&self.array, &rows, self.t, self.l, self.budget)?;
        let Some(first) = list.first() else {
            return Ok(LmdsDecodeOutcome {
                word: all_erased(self.message_len()),
                erased_columns: (0..self.n).collect(),
                membership: false,
                empty_list: true,
            });
        };
        let erased_columns: Vec<usize> = (0..self.n)
            .filter(|&j| {
                list[1..]
                    .iter()
                    .any(|m| (0..self.n).any(|r| m.rows[r][j] != first.rows[r][j]))
            })
            .collect();
        let mut word: ReconstructionWord =
            first.row_messages.concat().into_iter().map(Some).collect();
        for &j in &erased_columns {
            for idx in self.info_coordinates(j) {
                word[idx] = None;
            }
        }
        Ok(LmdsDecodeOutcome {
            word,
            erased_columns,
            membership: false,
            empty_list: false,
        })
    }
}

impl VpecCode for LmdsVpecCode {
    fn layout(&self) -> PacketLayout {
        PacketLayout::uniform(self.n, self.n, self.base.field().order())
    }

    fn message_len(&self) -> usize {
        self.row_k * self.n
    }

    fn params(&self) -> VpecParams {
        VpecParams {
            packets: self.n,
            message_len: self.message_len(),
            rate: rat(1, self.row_k as i64),
            distortion: rat((self.l * self.t) as i64, self.n as i64),
            errors: self.t,
        }
    }

    fn encode(&self, msg: &[Symbol]) -> Result<PacketSet> {
        if msg.len() != self.message_len() {
            return Err(Error::LengthMismatch {
                expected: self.message_len(),
                got: msg.len(),
            });
        }
        let rows: Vec<Vec<Symbol>> = msg.chunks(self.row_k).map(|c| c.to_vec()).collect();
        packetize(&self.array.encode(&rows)?)
    }

    fn decode(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        Ok(self.decode_detailed(received)?.word)
    }
}

/// Columns of a square array as packets.
pub fn packetize(rows: &[Vec<Symbol>]) -> Result<PacketSet> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok(PacketSet::new(
        (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect(),
    ))
}

/// Inverse of [`packetize`].
pub fn depacketize(packets: &PacketSet) -> Result<Vec<Vec<Symbol>>> {
    let n = packets.n_packets();
    if let Some(bad) = packets.packets.iter().find(|p| p.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            got: bad.len(),
        });
    }
    Ok((0..n)
        .map(|r| packets.packets.iter().map(|p| p[r]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::random_corruption;
    use crate::gf::field_build;
    use crate::lincode::{grs_build, GrsParams};
    use crate::packet::{erasure_count, erasure_distortion};
    use crate::ratio::Distortion;
    use crate::reference::{ball_intersection_decode, CodeTable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rs_base() -> LinearCode {
        let field = field_build(7, 1).unwrap();
        let params = GrsParams {
            eval_points: vec![0, 1, 2, 3, 4],
            multipliers: vec![1; 5],
        };
        grs_build(&field, 5, 2, &params).unwrap()
    }

    fn small_code() -> LmdsVpecCode {
        LmdsVpecCode::build(rs_base(), 2, 2, Budget::default()).unwrap()
    }

    #[test]
    fn parameter_arithmetic_matches_worked_cases() {
        let (rho, row_k, rate, d) = window_params(5, 2, 2).unwrap();
        assert_eq!(rho, rat(2, 5));
        assert_eq!(row_k, 2);
        assert_eq!(rate, rat(1, 2));
        assert_eq!(d, rat(4, 5));
        let (rho, row_k, rate, d) = window_params(128, 18, 2).unwrap();
        assert_eq!(rho, rat(101, 128));
        assert_eq!(row_k, 101);
        assert_eq!(rate, rat(1, 101));
        assert_eq!(d, rat(36, 128));
        assert!(window_params(5, 2, 3).is_err());
        assert!(window_params(4, 2, 2).is_err());
        assert!(window_params(20, 4, 8).is_err());
    }

    #[test]
    fn build_validates_base_and_alphabet() {
        let code = small_code();
        assert_eq!(code.row_dimension(), 2);
        assert_eq!(code.message_len(), 10);
        assert_eq!(code.window_fraction(), &rat(2, 5));
        let params = code.params();
        assert_eq!(params.rate, rat(1, 2));
        assert_eq!(params.distortion, rat(4, 5));
        assert_eq!(params.errors, 2);
        params.validate().unwrap();

        // Wrong base dimension for the window fraction.
        let field = field_build(7, 1).unwrap();
        let wide = GrsParams {
            eval_points: vec![0, 1, 2, 3, 4],
            multipliers: vec![1; 5],
        };
        let bad = grs_build(&field, 5, 3, &wide).unwrap();
        assert!(LmdsVpecCode::build(bad, 2, 2, Budget::default()).is_err());

        // A rank-2 code with dead columns is far from list decodable.
        let sparse = LinearCode::from_generator(
            field,
            vec![vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0]],
        )
        .unwrap();
        assert!(LmdsVpecCode::build(sparse, 2, 2, Budget::default()).is_err());

        // Alphabet must beat L(L+1)/2.
        let f2 = field_build(2, 1).unwrap();
        let rep = LinearCode::from_generator(f2, vec![vec![1, 1, 1, 1, 1], vec![0; 5]]);
        assert!(rep.is_err() || LmdsVpecCode::build(rep.unwrap(), 2, 2, Budget::default()).is_err());
    }

    #[test]
    fn encode_is_systematic_on_shifted_windows() {
        let code = small_code();
        let msg: Vec<Symbol> = vec![3, 1, 0, 6, 2, 2, 5, 4, 1, 0];
        let sent = code.encode(&msg).unwrap();
        let rows = depacketize(&sent).unwrap();
        for i in 0..5 {
            for c in 0..2 {
                assert_eq!(rows[i][(i + c) % 5], msg[i * 2 + c], "row {i} offset {c}");
            }
        }
        let zero = code.encode(&vec![0; 10]).unwrap();
        assert!(zero.packets.iter().all(|p| p.iter().all(|&s| s == 0)));
    }

    #[test]
    fn info_coordinates_partition_the_message() {
        let code = small_code();
        assert_eq!(code.info_coordinates(0), vec![0, 9]);
        let mut seen = Vec::new();
        for j in 0..5 {
            let coords = code.info_coordinates(j);
            assert_eq!(coords.len(), 2);
            seen.extend(coords);
        }
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn packetize_round_trips_and_checks_shape() {
        let rows = vec![vec![1, 2, 3], vec![4, 5, 6], vec![0, 1, 2]];
        let packets = packetize(&rows).unwrap();
        assert_eq!(packets.packets[1], vec![2, 5, 1]);
        assert_eq!(depacketize(&packets).unwrap(), rows);
        assert!(packetize(&[vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn clean_arrays_decode_through_the_membership_path() {
        let code = small_code();
        let msg: Vec<Symbol> = vec![0, 1, 2, 3, 4, 5, 6, 0, 1, 2];
        let sent = code.encode(&msg).unwrap();
        let out = code.decode_detailed(&sent).unwrap();
        assert!(out.membership);
        assert!(out.erased_columns.is_empty());
        assert_eq!(out.word, msg.iter().map(|&v| Some(v)).collect::<Vec<_>>());
    }

    #[test]
    fn random_column_corruptions_stay_sound() {
        let code = small_code();
        let layout = VpecCode::layout(&code);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let msg: Vec<Symbol> = (0..10).map(|_| rng.gen_range(0..7) as Symbol).collect();
        let sent = code.encode(&msg).unwrap();
        for trial in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            rng.set_stream(trial);
            let (altered, received) = random_corruption(&mut rng, &layout, &sent, 2);
            let out = code.decode_detailed(&received).unwrap();
            assert!(!out.empty_list, "list lost the sent codeword");
            let d = erasure_distortion(&msg, &out.word).unwrap();
            assert!(!d.is_infinite(), "wrong symbol under {altered:?}");
            assert!(d <= Distortion::Finite(rat(4, 5)));
            assert!(erasure_count(&out.word) <= 8);
            if altered.is_empty() {
                assert!(out.membership);
            }
        }
    }

    #[test]
    fn swap_toward_a_near_codeword_erases_their_difference() {
        // Pick a second message whose array differs from the first in
        // exactly four columns (a minimum-weight difference in one row),
        // then hand the decoder a received word exactly between them: two
        // swapped columns. Both land in the list, the four disagreement
        // columns are erased, and the two untouched coordinates survive.
        let code = small_code();
        let base = rs_base();
        let msg1: Vec<Symbol> = vec![1, 4, 0, 2, 3, 5, 2, 0, 6, 1];
        let delta = (0..49u32)
            .map(|i| vec![(i / 7) as Symbol, (i % 7) as Symbol])
            .find(|m| {
                let w = base
                    .encode(m)
                    .unwrap()
                    .iter()
                    .filter(|&&s| s != 0)
                    .count();
                w == 4
            })
            .expect("a weight-4 codeword exists");
        let mut msg2 = msg1.clone();
        let field = base.field().clone();
        let row = 3;
        for c in 0..2 {
            msg2[row * 2 + c] = field.add(msg2[row * 2 + c], delta[c]);
        }
        let sent1 = code.encode(&msg1).unwrap();
        let sent2 = code.encode(&msg2).unwrap();
        let differing: Vec<usize> = (0..5)
            .filter(|&j| sent1.packets[j] != sent2.packets[j])
            .collect();
        assert_eq!(differing.len(), 4);

        let mut received = sent1.clone();
        for &j in &differing[..2] {
            received.packets[j] = sent2.packets[j].clone();
        }
        let out = code.decode_detailed(&received).unwrap();
        assert!(!out.membership);
        assert!(!out.empty_list);
        assert_eq!(out.erased_columns, differing);
        assert_eq!(erasure_count(&out.word), 8);
        let d = erasure_distortion(&msg1, &out.word).unwrap();
        assert_eq!(d, Distortion::Finite(rat(4, 5)));
        // The survivors decode to the true symbols of both messages,
        // which agree there.
        let d2 = erasure_distortion(&msg2, &out.word).unwrap();
        assert!(!d2.is_infinite());
    }

    #[test]
    fn column_decoder_refines_the_exhaustive_ball_reference() {
        // A [5, 2] base over GF(4) keeps the full message table at 4^10
        // entries. Appending the leading coefficient to an evaluation
        // code reaches length q + 1 with minimum distance 4, and distance
        // 4 already forces every radius-2 ball to hold at most two
        // codewords: three would need pairwise disjoint displacement
        // pairs inside five coordinates.
        let f4 = field_build(2, 2).unwrap();
        let base = LinearCode::from_generator(
            f4,
            vec![vec![1, 1, 1, 1, 0], vec![0, 1, 2, 3, 1]],
        )
        .unwrap();
        let code = LmdsVpecCode::build(base, 2, 2, Budget::default()).unwrap();
        let table = CodeTable::from_code(&code, Budget::default()).unwrap();
        let layout = VpecCode::layout(&code);

        // The reference erases exactly the coordinates on which nearby
        // codewords disagree; the column decoder erases whole columns.
        // Wherever the column decoder keeps a value, the reference must
        // keep the same value, and with a unique nearby codeword the two
        // outputs coincide.
        let check = |received: &PacketSet, truth: Option<&[Symbol]>| {
            let ball = ball_intersection_decode(&table, received, 2).unwrap();
            let out = code.decode_detailed(received).unwrap();
            assert_eq!(ball.empty_ball, out.empty_list);
            for (c, (b, l)) in ball.word.iter().zip(&out.word).enumerate() {
                if l.is_some() {
                    assert_eq!(b, l, "coordinate {c}");
                }
            }
            if ball.ball_size == 1 {
                assert_eq!(ball.word, out.word);
            }
            if let Some(msg) = truth {
                for (c, l) in out.word.iter().enumerate() {
                    if let Some(v) = l {
                        assert_eq!(*v, msg[c], "surviving coordinate {c}");
                    }
                }
            }
        };

        for trial in 0..12u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            rng.set_stream(trial);
            let msg: Vec<Symbol> = (0..10).map(|_| rng.gen_range(0..4) as Symbol).collect();
            let sent = code.encode(&msg).unwrap();
            let (_, received) = random_corruption(&mut rng, &layout, &sent, 2);
            check(&received, Some(&msg));
        }
        for trial in 100..112u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            rng.set_stream(trial);
            let packets = (0..5)
                .map(|_| (0..5).map(|_| rng.gen_range(0..4) as Symbol).collect())
                .collect();
            check(&PacketSet::new(packets), None);
        }
    }

    #[test]
    fn shape_and_length_errors_are_reported() {
        let code = small_code();
        assert!(code.encode(&[0; 9]).is_err());
        let short = PacketSet::new(vec![vec![0; 5]; 4]);
        assert!(code.decode_detailed(&short).is_err());
        let ragged = PacketSet::new(vec![
            vec![0; 5],
            vec![0; 5],
            vec![0; 5],
            vec![0; 5],
            vec![0; 4],
        ]);
        assert!(code.decode_detailed(&ragged).is_err());
    }

    #[test]
    fn verification_respects_the_budget() {
        let err = LmdsVpecCode::build(rs_base(), 2, 2, Budget::new(100));
        assert!(matches!(err, Err(Error::Budget { .. })));
    }
}
