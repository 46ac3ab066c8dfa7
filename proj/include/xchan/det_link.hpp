#ifndef XCHAN_DET_LINK_HPP
#define XCHAN_DET_LINK_HPP

#include <optional>

#include "xchan/channel.hpp"
#include "xchan/rates.hpp"

namespace xchan {

// Payload bits for the six rate slots; lengths must equal the allocation
// rates.
struct DetMessages {
  gf2::BitVec m11c, m11p, m12, m21, m22c, m22p;
};

// Bit positions of one information slot inside its channel input.
struct LevelWindow {
  int start = 0;  // first level carrying information (1-based)
  int width = 0;
};

// Where each slot's bits sit inside u11/u12/u21/u22: common parts at the
// top of their vectors, private parts at the very bottom, cross messages
// below the structural zero pad so they align with the opposite common
// message at the unintended receiver.
struct DetLayout {
  LevelWindow u11c, u11p, u12, u21, u22c, u22p;
};

DetLayout det_layout(const RateAllocation& a, const ChannelLevels& levels);

DetInputs pack_inputs(const DetMessages& msgs, const RateAllocation& a,
                      const ChannelLevels& levels);

// Inverse of pack_inputs (reads the information windows back out).
DetMessages unpack_inputs(const DetInputs& in, const RateAllocation& a,
                          const ChannelLevels& levels);

// Decoded messages at one receiver. For rx 1 these are (m11c, m11p, m12);
// for rx 2 (m22c, m22p, m21).
struct DecodeOutcome {
  bool ok = false;  // false = alignment failure (dependent subspaces)
  gf2::BitVec direct_common;
  gf2::BitVec direct_private;
  gf2::BitVec cross;
};

// The stacked linear system a receiver solves: information-bearing
// columns of the direct matrix, the visible cross columns, and one
// column per level of the aligned interference sum.
struct DecoderSystem {
  gf2::Gf2System sys;
  int n_direct_common = 0;
  int n_direct_private = 0;
  int n_cross = 0;
  int n_interference = 0;  // = max of the two aligned interference rates
};

std::optional<DecoderSystem> build_decoder_system(const gf2::BitVec& y,
                                                  const DetChannelGains& g,
                                                  const RateAllocation& a,
                                                  const ChannelLevels& levels,
                                                  int rx);

// Solves for the receiver's two desired messages plus the interference
// sum (discarded). Reports an alignment failure exactly when the stacked
// columns are linearly dependent.
DecodeOutcome decode_receiver(const gf2::BitVec& y, const DetChannelGains& g,
                              const RateAllocation& a,
                              const ChannelLevels& levels, int rx);

// pack -> channel -> decode at both receivers == msgs.
bool roundtrip_ok(const DetMessages& msgs, const RateAllocation& a,
                  const ChannelLevels& levels, const DetChannelGains& g);

}  // namespace xchan

#endif  // XCHAN_DET_LINK_HPP
