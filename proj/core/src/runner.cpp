#include "bargain/runner.hpp"

namespace bargain {

SessionRecord run_session(const SessionConfig& config, Agent& buyer, Agent& seller,
                          const RunnerOptions& options) {
  SessionRecord record;
  record.session_id = options.session_id.empty() ? config.codename() : options.session_id;
  record.config = config;
  record.buyer_spec = options.buyer_spec;
  record.seller_spec = options.seller_spec;

  SessionState state(config);
  while (is_open(state.status)) {
    Agent& mover = state.next_mover == Role::Buyer ? buyer : seller;
    HalfMove move = request_half_move(mover, state, options.retries);
    if (auto* refused = std::get_if<RefusedMove>(&move)) {
      for (auto& f : refused->failed) record.failed_attempts.push_back(std::move(f));
      state.status = status::Invalid{refused->reason};
      break;
    }
    auto& accepted = std::get<AcceptedMove>(move);
    for (auto& f : accepted.failed) record.failed_attempts.push_back(std::move(f));
    record.raw.push_back(std::move(accepted.raw));
    state = advance(std::move(state), std::move(accepted.turn));
  }

  record.history = std::move(state.history);
  record.status = std::move(state.status);
  return record;
}

}  // namespace bargain
