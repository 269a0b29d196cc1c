/* C interface to the vpec packet-error coding library. */

#ifndef VPEC_H
#define VPEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum VpecStatus {
  VPEC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  VPEC_STATUS_NULL_ARGUMENT = 1,
  /**
   * Parameters violate a precondition of the construction.
   */
  VPEC_STATUS_INFEASIBLE = 2,
  /**
   * A buffer length does not match the handle's dimensions.
   */
  VPEC_STATUS_LENGTH_MISMATCH = 3,
  /**
   * The requested enumeration exceeds the work budget.
   */
  VPEC_STATUS_BUDGET = 4,
  /**
   * Malformed JSON or text input.
   */
  VPEC_STATUS_PARSE = 5,
  VPEC_STATUS_IO = 6,
  /**
   * The seeded search ran out of iterations without a witness.
   */
  VPEC_STATUS_SEARCH_EXHAUSTED = 7,
  /**
   * A soundness property failed during the run.
   */
  VPEC_STATUS_PROPERTY_VIOLATION = 8,
  /**
   * A panic was caught at the boundary; state may be stale.
   */
  VPEC_STATUS_PANIC = 9,
} VpecStatus;

/**
 * Adversary placement strategy for [`vpec_worst_distortion`].
 */
typedef enum VpecStrategy {
  /**
   * Every message against every corruption pattern.
   */
  VPEC_STRATEGY_EXHAUSTIVE = 0,
  /**
   * Seeded uniform corruptions.
   */
  VPEC_STRATEGY_RANDOM = 1,
  /**
   * Seeded corruptions that rewrite packets toward other codewords.
   */
  VPEC_STRATEGY_SWAP_TO_CODEWORD = 2,
} VpecStrategy;

/**
 * An encoder/decoder pair behind the ABI.
 */
typedef struct VpecCodeHandle VpecCodeHandle;

/**
 * Outcome of a distortion survey.
 */
typedef struct VpecSurvey {
  uint64_t worst_num;
  uint64_t worst_den;
  /**
   * 1 when some case produced a wrong symbol (infinite distortion);
   * the rational fields are then meaningless.
   */
  uint8_t worst_infinite;
  /**
   * 1 when every message and corruption pattern was enumerated.
   */
  uint8_t exhaustive;
  uint64_t wrong_symbol_events;
  uint64_t max_erasures;
  uint64_t cases;
} VpecSurvey;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (truncated,
 * always nul-terminated when `cap > 0`) and returns the full message
 * length in bytes, excluding the terminator.
 */
size_t vpec_last_error(char *buf, size_t cap);

/**
 * Builds a window-replication code with `t` tolerated packet errors,
 * window width `s`, and the given alphabet size. `rounds > 1` batches
 * that many messages per packet set.
 */
enum VpecStatus vpec_rep_code_new(size_t t,
                                  size_t s,
                                  uint32_t alphabet,
                                  size_t rounds,
                                  struct VpecCodeHandle **out);

/**
 * Searches a prime field of the given order for a base code with the
 * strong list-decoding properties the interleaved construction needs,
 * then builds that construction. Deterministic per seed.
 */
enum VpecStatus vpec_lmds_code_search(uint32_t order,
                                      size_t n,
                                      size_t t,
                                      size_t l,
                                      uint64_t seed,
                                      uint64_t max_iters,
                                      uint64_t budget,
                                      struct VpecCodeHandle **out);

/**
 * Builds the interleaved construction from a JSON code dump: either a
 * generator-matrix file or a search output with evaluation points and
 * multipliers. The JSON must be nul-terminated UTF-8.
 */
enum VpecStatus vpec_lmds_code_from_json(const char *json,
                                         size_t t,
                                         size_t l,
                                         uint64_t budget,
                                         struct VpecCodeHandle **out);

/**
 * Releases a handle. Null is ignored.
 */
void vpec_code_free(struct VpecCodeHandle *h);

/**
 * Number of packets per codeword, or 0 on a null handle.
 */
size_t vpec_code_packets(const struct VpecCodeHandle *h);

/**
 * Symbols per packet, or 0 on a null handle.
 */
size_t vpec_code_packet_len(const struct VpecCodeHandle *h);

/**
 * Source message length in symbols, or 0 on a null handle.
 */
size_t vpec_code_message_len(const struct VpecCodeHandle *h);

/**
 * Packet errors the code is declared against, or 0 on a null handle.
 */
size_t vpec_code_errors(const struct VpecCodeHandle *h);

/**
 * Per-packet rate as an exact fraction.
 */
enum VpecStatus vpec_code_rate(const struct VpecCodeHandle *h, uint64_t *num, uint64_t *den);

/**
 * Declared distortion budget as an exact fraction.
 */
enum VpecStatus vpec_code_distortion(const struct VpecCodeHandle *h, uint64_t *num, uint64_t *den);

/**
 * Encodes `msg` (message_len symbols) into `out`, which must hold
 * exactly packets * packet_len symbols; packets are written back to
 * back in layout order.
 */
enum VpecStatus vpec_encode(const struct VpecCodeHandle *h,
                            const uint16_t *msg,
                            size_t msg_len,
                            uint16_t *out,
                            size_t out_len);

/**
 * Decodes a flattened packet buffer (packets * packet_len symbols).
 * Writes message_len entries to both `out` and `known`: `known[i]` is 1
 * where `out[i]` is a recovered symbol and 0 where the position is
 * erased (then `out[i]` is 0). A wrong-symbol event is impossible by
 * construction; the decoder erases instead.
 */
enum VpecStatus vpec_decode(const struct VpecCodeHandle *h,
                            const uint16_t *packets,
                            size_t packets_len,
                            uint16_t *out,
                            uint8_t *known,
                            size_t out_len);

/**
 * Surveys decoding distortion under up to `t` corrupted packets.
 * `seed` and `trials` only apply to the seeded strategies; `budget`
 * bounds exhaustive enumeration (0 uses the default).
 */
enum VpecStatus vpec_worst_distortion(const struct VpecCodeHandle *h,
                                      size_t t,
                                      enum VpecStrategy strategy,
                                      uint64_t seed,
                                      uint64_t trials,
                                      uint64_t budget,
                                      struct VpecSurvey *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* VPEC_H */
