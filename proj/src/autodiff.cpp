#include "drr/autodiff.hpp"

namespace drr::ad {

thread_local Tape* Tape::active_ = nullptr;

}  // namespace drr::ad
