#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hip {

// Base of every error thrown by the library. `kind()` is a stable,
// machine-readable tag used by the CLI's --json-errors output.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define HIP_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                             \
        explicit Name(const std::string& message)                     \
            : Error(#Name, message) {}                                \
    }

HIP_DEFINE_ERROR(UnreadableFile);
HIP_DEFINE_ERROR(MalformedSource);
HIP_DEFINE_ERROR(UnknownFormat);
HIP_DEFINE_ERROR(DuplicateSourceId);
HIP_DEFINE_ERROR(EmptyAfterNormalization);
HIP_DEFINE_ERROR(ConfigError);
HIP_DEFINE_ERROR(EmptyGraph);
HIP_DEFINE_ERROR(UnknownEdge);
HIP_DEFINE_ERROR(UnknownClusterId);
HIP_DEFINE_ERROR(ArtifactMissing);
HIP_DEFINE_ERROR(ArtifactError);
HIP_DEFINE_ERROR(ConstantInput);
HIP_DEFINE_ERROR(LengthMismatch);
HIP_DEFINE_ERROR(NoTimestampedRecords);
HIP_DEFINE_ERROR(EmptySubclusterFamilies);

#undef HIP_DEFINE_ERROR

}  // namespace hip
