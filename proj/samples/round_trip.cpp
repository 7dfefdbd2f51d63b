// Small tour of the library: simulate a few arrivals, invert the trace,
// count and list the other sequences that would have produced it.
//
//   $ ./samples/round_trip 3 4 1 2

#include <cstdlib>
#include <iostream>

#include "reorder/reorder.hpp"

int main(int argc, char** argv) {
  using namespace reorder;

  PacketIdSequence arrivals{3, 4, 1, 2};
  if (argc > 1) {
    arrivals.clear();
    for (int i = 1; i < argc; ++i) arrivals.push_back(std::atoll(argv[i]));
  }

  const ReceiverTrace trace = simulate_receiver(arrivals);
  std::cout << "arrivals:      " << format_plain(arrivals) << "\n";
  std::cout << "buffer trace:  " << format_plain(trace.buffer_size) << "\n";
  std::cout << "signed trace:  " << format_plain(trace.signed_buffer) << "\n";
  std::cout << "ack trace:     " << format_plain(trace.ack) << "\n";

  const SignedBufferPattern w = trace.signed_buffer;
  std::cout << "pattern:       " << format_hash(w) << "\n";
  std::cout << "preimages:     " << count_preimages_signed(w).str() << "\n";

  auto witness = reconstruct_signed(w);
  if (witness.ok())
    std::cout << "canonical:     " << format_plain(witness.value()) << "\n";

  auto all = enumerate_preimages(w, 50);
  if (all.ok()) {
    for (const PacketIdSequence& p : all.items)
      std::cout << "  preimage     " << format_plain(p) << "\n";
  } else {
    std::cout << "  (" << all.exceeded->str() << " preimages, not listing)\n";
  }
  return 0;
}
