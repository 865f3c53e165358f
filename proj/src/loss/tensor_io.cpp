#include <nlohmann/json.hpp>

#include <bit>
#include <cstring>

#include "lumikit/errors.hpp"
#include "lumikit/io.hpp"
#include "lumikit/loss.hpp"

namespace lumikit {

namespace fs = std::filesystem;

static_assert(std::endian::native == std::endian::little, "f32le I/O assumes a little-endian host");

Tensor read_tensor(const fs::path& header_path) {
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(read_text_file(header_path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("tensor header '" + header_path.string() + "': " + e.what());
    }
    int h = 0, w = 0, c = 1;
    fs::path data_path;
    try {
        if (header.value("dtype", std::string{"f32le"}) != "f32le") {
            throw ValidationError("tensor dtype must be f32le");
        }
        const auto& shape = header.at("shape");
        if (!shape.is_array() || (shape.size() != 2 && shape.size() != 3)) {
            throw ValidationError("tensor shape must be [H, W] or [H, W, C]");
        }
        h = shape[0].get<int>();
        w = shape[1].get<int>();
        if (shape.size() == 3) c = shape[2].get<int>();
        data_path = header_path.parent_path() / header.at("data_file").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("tensor header '" + header_path.string() + "': " + e.what());
    }
    const auto bytes = read_file_bytes(data_path);
    const std::size_t expected = static_cast<std::size_t>(h) * w * c * sizeof(float);
    if (h <= 0 || w <= 0 || c <= 0 || bytes.size() != expected) {
        throw ValidationError("tensor data '" + data_path.string() + "' has " +
                              std::to_string(bytes.size()) + " bytes, expected " +
                              std::to_string(expected));
    }
    std::vector<double> data(expected / sizeof(float));
    for (std::size_t i = 0; i < data.size(); ++i) {
        float f;
        std::memcpy(&f, bytes.data() + i * sizeof(float), sizeof(float));
        data[i] = f;
    }
    return Tensor(h, w, c, std::move(data));
}

void write_tensor(const fs::path& header_path, const Tensor& tensor) {
    fs::path data_path = header_path;
    data_path.replace_extension(".bin");
    std::vector<std::uint8_t> bytes(tensor.size() * sizeof(float));
    for (std::size_t i = 0; i < tensor.size(); ++i) {
        const float f = static_cast<float>(tensor.data()[i]);
        std::memcpy(bytes.data() + i * sizeof(float), &f, sizeof(float));
    }
    write_file_bytes(data_path, bytes);
    nlohmann::ordered_json header;
    header["dtype"] = "f32le";
    header["shape"] = {tensor.height(), tensor.width(), tensor.channels()};
    header["data_file"] = data_path.filename().string();
    write_text_file(header_path, header.dump(2) + "\n");
}

}  // namespace lumikit
