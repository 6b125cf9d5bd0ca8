#pragma once
#include <stdexcept>
#include <string>

namespace et {

// Base for all recoverable errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ET_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                         \
    explicit Name(const std::string& what) : Error(what) {}     \
  }

ET_DEFINE_ERROR(NotNullPlane);
ET_DEFINE_ERROR(InvalidFrame);
ET_DEFINE_ERROR(SingularFrame);
ET_DEFINE_ERROR(DependentInput);
ET_DEFINE_ERROR(DomainError);
ET_DEFINE_ERROR(ZeroWeight);
ET_DEFINE_ERROR(NotNull);
ET_DEFINE_ERROR(ZeroVector);
ET_DEFINE_ERROR(DegenerateInput);
ET_DEFINE_ERROR(BadSpec);
ET_DEFINE_ERROR(NotBiisotropic);
ET_DEFINE_ERROR(CalibrationFailure);
ET_DEFINE_ERROR(NotGeneric);
ET_DEFINE_ERROR(DegenerateComplement);
ET_DEFINE_ERROR(KindMismatch);
ET_DEFINE_ERROR(UmbilicLocus);
ET_DEFINE_ERROR(NotTimelike);
ET_DEFINE_ERROR(FrameReductionFailure);
ET_DEFINE_ERROR(MixedSignal);
ET_DEFINE_ERROR(NotFibered);
ET_DEFINE_ERROR(DegenerateMetric);
ET_DEFINE_ERROR(QuadratureFailure);
ET_DEFINE_ERROR(BadFactor);
ET_DEFINE_ERROR(InfiniteAffineLength);
ET_DEFINE_ERROR(SynthesisFailure);

#undef ET_DEFINE_ERROR

}  // namespace et
