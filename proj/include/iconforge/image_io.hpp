// Copyright 2026 The iconforge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// PNG (alpha preserved) and JPEG (RGB) file I/O over libpng / libjpeg.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include <jpeglib.h>

#include "iconforge/errors.hpp"
#include "iconforge/imaging.hpp"

namespace iconforge {

namespace detail {

inline std::string lower_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct JpegErrorJump {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

inline void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorJump*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace detail

inline bool is_image_path(const std::filesystem::path& p) {
  const auto ext = detail::lower_extension(p);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

inline RasterImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError(path.string(), "cannot read PNG: " + msg);
  }
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  const int channels = alpha ? 4 : 3;
  RasterImage out(static_cast<int>(image.width), static_cast<int>(image.height), channels);
  if (!png_image_finish_read(&image, nullptr, out.pixels().data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError(path.string(), "cannot decode PNG: " + msg);
  }
  return out;
}

inline void write_png(const std::filesystem::path& path, const RasterImage& img) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 4 ? PNG_FORMAT_RGBA : img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.pixels().data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError(path.string(), "cannot write PNG: " + msg);
  }
}

inline RasterImage read_jpeg(const std::filesystem::path& path) {
  detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError(path.string(), "cannot open for reading");
  jpeg_decompress_struct cinfo{};
  detail::JpegErrorJump err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = detail::jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IoError(path.string(), std::string("cannot decode JPEG: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  RasterImage out(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height), 3);
  const std::size_t stride = static_cast<std::size_t>(out.width()) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.pixels().data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

inline void write_jpeg(const std::filesystem::path& path, const RasterImage& img, int quality = 92) {
  const RasterImage rgb = to_rgb(img);
  detail::FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw IoError(path.string(), "cannot open for writing");
  jpeg_compress_struct cinfo{};
  detail::JpegErrorJump err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = detail::jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    throw IoError(path.string(), std::string("cannot encode JPEG: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, file.get());
  cinfo.image_width = static_cast<JDIMENSION>(rgb.width());
  cinfo.image_height = static_cast<JDIMENSION>(rgb.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(rgb.width()) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(rgb.pixels().data() + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
}

/// Dispatches on the file extension (.png, .jpg, .jpeg).
inline RasterImage read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError(path.string(), "no such file");
  const auto ext = detail::lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".jpg" || ext == ".jpeg") return read_jpeg(path);
  throw IoError(path.string(), "unsupported image format '" + ext + "'");
}

inline void write_image(const std::filesystem::path& path, const RasterImage& img) {
  const auto ext = detail::lower_extension(path);
  if (ext == ".png") return write_png(path, img);
  if (ext == ".jpg" || ext == ".jpeg") return write_jpeg(path, img);
  throw IoError(path.string(), "unsupported image format '" + ext + "'");
}

}  // namespace iconforge
