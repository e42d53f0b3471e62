#pragma once

#include <filesystem>
#include <optional>

#include "efnet/mnist_io.hpp"

namespace efnet::testing {

inline std::filesystem::path mnist_dir() { return EFNET_MNIST_DIR; }
inline std::filesystem::path mnist_images() { return mnist_dir() / "t10k-images.idx3-ubyte"; }
inline std::filesystem::path mnist_labels() { return mnist_dir() / "t10k-labels.idx1-ubyte"; }

inline bool have_mnist() { return std::filesystem::exists(mnist_images()) && std::filesystem::exists(mnist_labels()); }

/// Loaded once per process; empty when the files are absent.
inline const std::optional<Dataset>& mnist_test_set() {
    static const std::optional<Dataset> data = [] {
        return have_mnist() ? std::optional<Dataset>(load_dataset(mnist_images(), mnist_labels())) : std::nullopt;
    }();
    return data;
}

}  // namespace efnet::testing

#define REQUIRE_MNIST()                                                                           \
    do {                                                                                          \
        if (!::efnet::testing::have_mnist()) GTEST_SKIP() << "MNIST test set not found in " << EFNET_MNIST_DIR; \
    } while (0)
