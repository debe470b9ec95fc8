#ifndef MALKIT_CPC_INFONCE_HPP
#define MALKIT_CPC_INFONCE_HPP

#include "malkit/cpc/model.hpp"

namespace malkit::cpc {

// Contrastive loss over a minibatch. For every anchor (utterance b, frame t,
// step k) the positive is z at t+k in the same utterance and the negatives
// are z at t+k in the other B-1 utterances, so each softmax has exactly B
// candidates. Anchors run over t in [0, T-K); anchors whose positive falls
// into padding are dropped. The result is the mean over steps of the
// per-step average cross-entropy.
//
// training=true draws encoder dropout masks from rng. When `grads` is given,
// parameter gradients of the loss are accumulated into it.
double infonce_loss(const CpcModel& model, const CpcBatch& batch,
                    Rng* rng = nullptr, bool training = false,
                    CpcGrads* grads = nullptr);

}  // namespace malkit::cpc

#endif  // MALKIT_CPC_INFONCE_HPP
