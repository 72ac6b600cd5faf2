#include "screencode/png_io.hpp"

#include <png.h>

#include <cstring>
#include <stdexcept>

namespace screencode {

Frame read_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
        throw std::runtime_error("unreadable image: " + path.string() + " (" + image.message +
                                 ")");
    }
    image.format = PNG_FORMAT_RGB;
    Frame frame;
    frame.width = static_cast<int>(image.width);
    frame.height = static_cast<int>(image.height);
    frame.pixels.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, frame.pixels.data(), 0, nullptr)) {
        png_image_free(&image);
        throw std::runtime_error("unreadable image: " + path.string() + " (" + image.message +
                                 ")");
    }
    return frame;
}

void write_png(const std::filesystem::path& path, const Frame& frame) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(frame.width);
    image.height = static_cast<png_uint_32>(frame.height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, frame.pixels.data(), 0,
                                 nullptr)) {
        throw std::runtime_error("cannot write image: " + path.string() + " (" + image.message +
                                 ")");
    }
}

std::vector<uint8_t> encode_png(const Frame& frame) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(frame.width);
    image.height = static_cast<png_uint_32>(frame.height);
    image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, frame.pixels.data(), 0, nullptr)) {
        throw std::runtime_error(std::string("png encode failed: ") + image.message);
    }
    std::vector<uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, frame.pixels.data(), 0,
                                   nullptr)) {
        throw std::runtime_error(std::string("png encode failed: ") + image.message);
    }
    out.resize(size);
    return out;
}

}  // namespace screencode
