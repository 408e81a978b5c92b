package com.acme.netlab.tests;

import com.acme.netlab.io.CsvExporter;
import com.acme.netlab.io.Exporter;
import com.acme.netlab.util.Log;
import static com.acme.netlab.core.TestSteps.*;

public class ExportTest {

    public void exportCsv() {
        TestBegin("Export report as csv");
        Exporter exporter = new CsvExporter();
        exporter.export("/tmp/report.csv");
        TestEnd();
    }

    public void exportFormatName() {
        TestBegin("Export format name is csv");
        Log.info(new CsvExporter().format());
        TestEnd();
    }
}
